"""Sankey documents, CSV tables and the run manifest.

Every number is written with 9 significant digits; every file is UTF-8 with
``\\n`` line endings so reruns are byte-identical.
"""
from __future__ import annotations

import csv
import hashlib
import json
import platform
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .analysis.flows import TOP_FLOWS, FlowMatrix, top_flows
from .analysis.walktrap import CommunitySummary
from .errors import ParameterError
from .topicmodel import TopicModel, topic_label

LABEL_TERMS = 5


def fmt(x: float) -> str:
    return format(float(x), ".9g")


@dataclass(frozen=True)
class SankeyNode:
    id: str
    side: str  # "source" or "target"
    topic: int
    label: str


@dataclass(frozen=True)
class SankeyLink:
    source: str
    target: str
    value: float


@dataclass(frozen=True)
class SankeyDocument:
    year: int
    nodes: tuple[SankeyNode, ...]
    links: tuple[SankeyLink, ...]

    def to_dict(self) -> dict:
        return {
            "year": self.year,
            "nodes": [asdict(n) for n in self.nodes],
            # 9 significant digits, same text as the flow CSV entries
            "links": [{**asdict(link), "value": float(fmt(link.value))} for link in self.links],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, obj: Mapping) -> "SankeyDocument":
        nodes = tuple(SankeyNode(**n) for n in obj["nodes"])
        links = tuple(SankeyLink(**link) for link in obj["links"])
        return cls(int(obj["year"]), nodes, links)


def export_sankey(
    matrix: FlowMatrix,
    model: TopicModel,
    k: int = TOP_FLOWS,
    exclude_intra: bool = True,
) -> SankeyDocument:
    """Render the ``k`` strongest flows as a two-sided Sankey document.

    A topic that appears on both sides becomes two nodes (``s<t>`` on the left,
    ``t<t>`` on the right). Link values are the matrix entries themselves.
    """
    if model.n_topics != matrix.n_topics:
        raise ParameterError(f"model has {model.n_topics} topics, matrix has {matrix.n_topics}")
    flows = top_flows(matrix, k, exclude_intra)
    sources = sorted({t1 for t1, _, _ in flows})
    targets = sorted({t2 for _, t2, _ in flows})
    nodes = [SankeyNode(f"s{t}", "source", t, topic_label(model, t, LABEL_TERMS)) for t in sources]
    nodes += [SankeyNode(f"t{t}", "target", t, topic_label(model, t, LABEL_TERMS)) for t in targets]
    links = [SankeyLink(f"s{t1}", f"t{t2}", v) for t1, t2, v in flows]
    return SankeyDocument(matrix.year, tuple(nodes), tuple(links))


# -- CSV tables ---------------------------------------------------------------

def _write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_pagerank_csv(path, ranked: Sequence[tuple[str, float]]) -> None:
    _write_rows(path, ["author", "score"], ranked)


def write_communities_csv(path, summaries: Mapping[int, CommunitySummary]) -> None:
    rows = []
    for year in sorted(summaries):
        for b in summaries[year].blocks:
            main = b.topics[0][0] if len(b.topics) > 0 else None
            second = b.topics[1][0] if len(b.topics) > 1 else None
            rows.append((year, b.block_id, b.size, main, second))
    _write_rows(path, ["year", "block_id", "size", "main_topic", "second_topic"], rows)


def write_community_sizes_csv(path, summaries: Mapping[int, CommunitySummary]) -> None:
    rows = [(y, t, s) for y in sorted(summaries) for t, s in summaries[y].topic_sizes.items()]
    _write_rows(path, ["year", "topic", "size"], rows)


def write_core_grid_csv(path, grid: np.ndarray, years: Sequence[int]) -> None:
    """Rows are topics, columns are years."""
    _write_rows(path, ["topic", *map(str, years)], ([t, *map(int, grid[t])] for t in range(grid.shape[0])))


def write_flow_csv(path, matrix: FlowMatrix) -> None:
    n = matrix.n_topics
    _write_rows(path, ["t1\\t2", *map(str, range(n))], ([t, *map(float, matrix.values[t])] for t in range(n)))


def read_flow_csv(path, year: int) -> FlowMatrix:
    _, rows = read_csv(path)
    return FlowMatrix(year, np.array([[float(v) for v in r[1:]] for r in rows]).reshape(len(rows), -1))


def write_metrics_csv(path, rows: Iterable[tuple[int, int, float | None, float]]) -> None:
    _write_rows(path, ["year", "topic", "asp", "alc"], rows)


# -- manifest -------------------------------------------------------------------

def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _versions() -> dict[str, str]:
    import numba
    import scipy

    from . import __version__

    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
        "topicflow": __version__,
    }


def write_manifest(out_dir: str | Path, config: Mapping[str, object], seed: int, files: Iterable[str]) -> dict:
    """Record config, seed, library versions and sha256 of every listed output.

    Paths in ``files`` are relative to ``out_dir``. The manifest holds no
    timestamps or absolute output paths, so identical runs produce identical
    manifests.
    """
    out = Path(out_dir)
    manifest = {
        "config": dict(config),
        "seed": seed,
        "versions": _versions(),
        "outputs": {f: sha256_file(out / f) for f in sorted(files)},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest
