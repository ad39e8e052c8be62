import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from topicflow.corpus import Corpus, PublicationRecord  # noqa: E402
from topicflow.tfn import EdgeRelation, ExpertiseTable, TopicFlowNetwork  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "topicflow" / "data"
FIXTURE = DATA / "fixture_corpus.jsonl"
LANG_FIXTURE = DATA / "language_fixture.jsonl"


def make_corpus(papers):
    """papers: iterable of (pid, year, authors[, abstract])."""
    recs = []
    for p in papers:
        pid, year, authors = p[:3]
        abstract = p[3] if len(p) > 3 else "text"
        recs.append(PublicationRecord(pid, f"title {pid}", abstract, tuple(authors), year))
    return Corpus.from_records(recs)


def make_view(n_nodes, edges, year=2000, n_topics=1):
    """Network straight from ``(src, dst, weight[, topic])`` index tuples."""
    cells = {}
    for e in edges:
        t = e[3] if len(e) > 3 else 0
        cells.setdefault((year, t), []).append((e[0], e[1], float(e[2])))
    rels = {k: EdgeRelation.from_triples(v) for k, v in cells.items()}
    authors = tuple(f"n{i:03d}" for i in range(n_nodes))
    return TopicFlowNetwork(authors, (year,), n_topics, rels, ExpertiseTable(n_topics, {year: {}}))


@pytest.fixture
def mini():
    """Three papers, three authors, two topics, one year."""
    corpus = make_corpus([("p1", 2000, ["a", "b"]), ("p2", 2000, ["a"]), ("p3", 2000, ["b", "c"])])
    theta = {
        "p1": np.array([0.8, 0.2]),
        "p2": np.array([0.6, 0.4]),
        "p3": np.array([0.1, 0.9]),
    }
    return corpus, theta
