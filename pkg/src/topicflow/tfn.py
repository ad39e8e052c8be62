"""Topic Flow Network construction, restriction and main topics."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import DEFAULT_WINDOW, Corpus
from .errors import ParameterError

DEFAULT_TOP_L = 8


@dataclass(frozen=True)
class EdgeRelation:
    """Edges of one (year, topic) cell as parallel arrays of author indices."""

    source: np.ndarray
    target: np.ndarray
    weight: np.ndarray

    def __len__(self) -> int:
        return len(self.weight)

    @classmethod
    def from_triples(cls, triples: Sequence[tuple[int, int, float]]) -> "EdgeRelation":
        triples = sorted(triples)
        src = np.array([t[0] for t in triples], dtype=np.int64)
        dst = np.array([t[1] for t in triples], dtype=np.int64)
        w = np.array([t[2] for t in triples], dtype=np.float64)
        for a in (src, dst, w):
            a.flags.writeable = False
        return cls(src, dst, w)

    @property
    def loops(self) -> np.ndarray:
        return self.source == self.target


class ExpertiseTable:
    """Self-loop weights: (author, year) -> topic vector."""

    def __init__(self, n_topics: int, table: Mapping[int, Mapping[str, np.ndarray]]):
        self.n_topics = n_topics
        self._table = {y: dict(v) for y, v in table.items()}

    @property
    def years(self) -> list[int]:
        return sorted(self._table)

    def authors(self, year: int) -> list[str]:
        return sorted(self._table.get(year, {}))

    def get(self, author: str, year: int) -> np.ndarray:
        vec = self._table.get(year, {}).get(author)
        return np.zeros(self.n_topics) if vec is None else vec

    def __contains__(self, key) -> bool:
        author, year = key
        return author in self._table.get(year, {})


@dataclass(frozen=True)
class TopicFlowNetwork:
    authors: tuple[str, ...]
    years: tuple[int, ...]
    n_topics: int
    edges: Mapping[tuple[int, int], EdgeRelation]
    expertise: ExpertiseTable = field(compare=False, repr=False)
    provenance: Mapping[str, object] = field(default_factory=dict, compare=False)

    def author_index(self) -> dict[str, int]:
        idx = self.__dict__.get("_aidx")
        if idx is None:
            idx = {a: i for i, a in enumerate(self.authors)}
            object.__setattr__(self, "_aidx", idx)
        return idx

    def iter_edges(self, include_loops: bool = True):
        """Yield ``(year, topic, source, target, weight)`` in export order."""
        for (y, t) in sorted(self.edges):
            rel = self.edges[(y, t)]
            for s, d, w in zip(rel.source, rel.target, rel.weight):
                if include_loops or s != d:
                    yield y, t, self.authors[s], self.authors[d], float(w)

    def edge_dict(self, include_loops: bool = True) -> dict[tuple[int, int, str, str], float]:
        return {(y, t, s, d): w for y, t, s, d, w in self.iter_edges(include_loops)}

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.edges.values())


def build_tfn(
    corpus: Corpus,
    theta: Mapping[str, np.ndarray],
    years: Iterable[int] | None = None,
    window: int = DEFAULT_WINDOW,
    top_l: int = DEFAULT_TOP_L,
    n_topics: int | None = None,
    model_id: str | None = None,
) -> TopicFlowNetwork:
    """Build the per-(year, topic) directed edge relations.

    For each year the windowed papers of every co-author pair are summed into a
    shared topic vector. A t-edge runs from the author with the larger (or
    equal) expertise on t; exact ties yield both directions. Each pair keeps
    only its ``top_l`` heaviest topics (lower index wins ties). Self-loops carry
    each author's expertise and are not subject to the top-l cut.

    ``theta`` maps paper ids to topic proportion vectors; papers without an
    entry contribute no weight.
    """
    if years is None:
        years = corpus.years
    years = sorted(set(years))
    if not years:
        raise ParameterError("no years to build")
    if top_l < 1:
        raise ParameterError("top_l must be >= 1")
    if window < 0:
        raise ParameterError("window must be non-negative")
    if n_topics is None:
        if not theta:
            raise ParameterError("n_topics required when theta is empty")
        n_topics = len(next(iter(theta.values())))

    authors = tuple(corpus.authors)
    aidx = {a: i for i, a in enumerate(authors)}
    by_year: dict[int, list] = {}
    for rec in corpus:
        vec = theta.get(rec.paper_id)
        if vec is None:
            continue
        members = sorted(aidx[a] for a in rec.authors)
        by_year.setdefault(rec.year, []).append((rec.paper_id, members, np.asarray(vec, dtype=float)))

    edges: dict[tuple[int, int], EdgeRelation] = {}
    expertise: dict[int, dict[str, np.ndarray]] = {}
    for y in years:
        # paper-id order fixes the floating-point summation order
        papers = sorted(
            (p for yy in range(y - window, y + 1) for p in by_year.get(yy, ())),
            key=lambda p: p[0],
        )
        exp_y, cells = _year_edges(papers, n_topics, top_l)
        expertise[y] = {authors[i]: v for i, v in exp_y.items()}
        for t, triples in cells.items():
            edges[(y, t)] = EdgeRelation.from_triples(triples)

    prov = {"window": window, "top_l": top_l, "model": model_id}
    return TopicFlowNetwork(authors, tuple(years), n_topics, edges, ExpertiseTable(n_topics, expertise), prov)


def _year_edges(papers, n_topics: int, top_l: int):
    expertise: dict[int, np.ndarray] = {}
    shared: dict[tuple[int, int], np.ndarray] = {}
    for _, members, vec in papers:
        for a in members:
            if a in expertise:
                expertise[a] = expertise[a] + vec
            else:
                expertise[a] = vec.copy()
        for a, b in combinations(members, 2):
            if (a, b) in shared:
                shared[(a, b)] = shared[(a, b)] + vec
            else:
                shared[(a, b)] = vec.copy()

    cells: dict[int, list[tuple[int, int, float]]] = {}
    for a, vec in expertise.items():
        for t in np.flatnonzero(vec > 0):
            cells.setdefault(int(t), []).append((a, a, float(vec[t])))
    for (a, b), vec in shared.items():
        positive = [t for t in range(n_topics) if vec[t] > 0]
        positive.sort(key=lambda t: (-vec[t], t))
        ea, eb = expertise[a], expertise[b]
        for t in positive[:top_l]:
            w = float(vec[t])
            if ea[t] >= eb[t]:
                cells.setdefault(t, []).append((a, b, w))
            if eb[t] >= ea[t]:
                cells.setdefault(t, []).append((b, a, w))
    expertise = {a: v for a, v in expertise.items() if np.any(v > 0)}
    return expertise, cells


def restrict(tfn: TopicFlowNetwork, year: int | None = None, topic: int | None = None) -> TopicFlowNetwork:
    """Read-only view holding only the matching edge relations; nodes unchanged."""
    if year is not None and year not in tfn.years:
        raise ParameterError(f"year {year} not in network")
    if topic is not None and not 0 <= topic < tfn.n_topics:
        raise ParameterError(f"topic {topic} out of range")
    keep = {
        k: rel
        for k, rel in tfn.edges.items()
        if (year is None or k[0] == year) and (topic is None or k[1] == topic)
    }
    years = tfn.years if year is None else (year,)
    return TopicFlowNetwork(tfn.authors, years, tfn.n_topics, keep, tfn.expertise, dict(tfn.provenance))


def main_topic(expertise: ExpertiseTable, author: str, year: int) -> int | None:
    vec = expertise.get(author, year)
    if not np.any(vec > 0):
        return None
    return int(np.argmax(vec))  # first maximum, i.e. lowest index on ties


def main_topics(expertise: ExpertiseTable, year: int) -> dict[str, int]:
    out = {}
    for a in expertise.authors(year):
        t = main_topic(expertise, a, year)
        if t is not None:
            out[a] = t
    return out


def ranked_topics(expertise: ExpertiseTable, authors: Iterable[str], year: int) -> list[tuple[int, int]]:
    """``(topic, count)`` of members' main topics, most frequent first."""
    counts = Counter()
    for a in authors:
        t = main_topic(expertise, a, year)
        if t is not None:
            counts[t] += 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def main_topic_of_set(expertise: ExpertiseTable, authors: Iterable[str], year: int) -> int | None:
    ranked = ranked_topics(expertise, authors, year)
    return ranked[0][0] if ranked else None


def write_edge_list(tfn: TopicFlowNetwork, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("year\ttopic\tsource\ttarget\tweight\n")
        for y, t, s, d, w in tfn.iter_edges():
            fh.write(f"{y}\t{t}\t{s}\t{d}\t{w:.9g}\n")


def read_edge_list(path: str | Path) -> list[tuple[int, int, str, str, float]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            y, t, s, d, w = line.rstrip("\n").split("\t")
            rows.append((int(y), int(t), s, d, float(w)))
    return rows
