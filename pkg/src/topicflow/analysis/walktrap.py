"""Walktrap community detection with exact random-walk distances."""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..tfn import ExpertiseTable, TopicFlowNetwork, main_topic
from ._graph import undirected_weighted

WALK_LENGTH = 4


@dataclass(frozen=True)
class CommunityPartition:
    year: int | None
    blocks: tuple[tuple[str, ...], ...]
    modularity: float

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def membership(self) -> dict[str, int]:
        return {a: i for i, b in enumerate(self.blocks) for a in b}


def modularity(adj: sp.spmatrix, labels) -> float:
    """Newman modularity of a weighted undirected graph (symmetric ``adj``)."""
    adj = sp.csr_matrix(adj)
    two_w = adj.sum()
    if two_w == 0:
        return 0.0
    labels = np.asarray(labels)
    deg = np.asarray(adj.sum(axis=1)).ravel()
    coo = adj.tocoo()
    inside = coo.data[labels[coo.row] == labels[coo.col]].sum()
    tot = np.bincount(np.unique(labels, return_inverse=True)[1], weights=deg)
    return float(inside / two_w - np.sum((tot / two_w) ** 2))


class _Community:
    __slots__ = ("size", "vec", "tot", "members")

    def __init__(self, size, vec, tot, members):
        self.size = size
        self.vec = vec
        self.tot = tot
        self.members = members


def walktrap_labels(adj: sp.spmatrix, walk_length: int = WALK_LENGTH) -> tuple[np.ndarray, float]:
    """Walktrap on a symmetric weighted adjacency matrix without self-loops.

    Every vertex gets an artificial self-loop (weight = mean incident weight,
    1 for isolated vertices) before the walk matrix is formed, as in the
    original formulation. Returns per-vertex labels of the maximal-modularity
    cut and that modularity.
    """
    if walk_length < 1:
        raise ValueError("walk_length must be >= 1")
    adj = sp.csr_matrix(adj, dtype=float)
    n = adj.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64), 0.0
    deg = np.asarray(adj.sum(axis=1)).ravel()
    nnz_row = np.diff(adj.indptr)
    loop = np.where(nnz_row > 0, deg / np.maximum(nnz_row, 1), 1.0)
    two_w = deg.sum()
    if two_w == 0:
        return np.arange(n), 0.0

    n_comp, comp = connected_components(adj, directed=False)
    comms: dict[int, _Community] = {}
    # neighbours: id -> {id: [delta_sigma, weight_between]}
    nbrs: dict[int, dict[int, list]] = {}
    for c in range(n_comp):
        idx = np.flatnonzero(comp == c)
        a = adj[idx][:, idx].toarray() + np.diag(loop[idx])
        d = a.sum(axis=1)
        p = a / d[:, None]
        pt = np.linalg.matrix_power(p, walk_length)
        rows = pt / np.sqrt(d)[None, :]
        for local, v in enumerate(idx):
            comms[int(v)] = _Community(1, rows[local], deg[v], [int(v)])
            nbrs[int(v)] = {}

    heap: list[tuple[float, int, int]] = []
    coo = sp.triu(adj, k=1).tocoo()
    for i, j, w in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
        diff = comms[i].vec - comms[j].vec
        ds = 0.5 * float(diff @ diff) / n
        nbrs[i][j] = [ds, w]
        nbrs[j][i] = [ds, w]
        heapq.heappush(heap, (ds, i, j))

    q = -float(np.sum((deg / two_w) ** 2))
    best_q, best_step = q, 0
    merges: list[tuple[int, int, int]] = []
    next_id = n
    while heap:
        ds, i, j = heapq.heappop(heap)
        if i not in comms or j not in comms or nbrs[i].get(j, [None])[0] != ds:
            continue
        c1, c2 = comms.pop(i), comms.pop(j)
        n1, n2 = nbrs.pop(i), nbrs.pop(j)
        w12 = n1[j][1]
        new = next_id
        next_id += 1
        size = c1.size + c2.size
        vec = (c1.size * c1.vec + c2.size * c2.vec) / size
        merged = _Community(size, vec, c1.tot + c2.tot, c1.members + c2.members)
        comms[new] = merged
        nbrs[new] = {}
        q += 2.0 * w12 / two_w - 2.0 * c1.tot * c2.tot / two_w**2
        merges.append((i, j, new))
        if q > best_q + 1e-12:
            best_q, best_step = q, len(merges)

        for k in sorted(set(n1) | set(n2)):
            if k in (i, j):
                continue
            ck = comms[k]
            if k in n1 and k in n2:
                ds_new = (
                    (c1.size + ck.size) * n1[k][0] + (c2.size + ck.size) * n2[k][0] - ck.size * ds
                ) / (size + ck.size)
                w = n1[k][1] + n2[k][1]
            else:
                diff = vec - ck.vec
                ds_new = float(diff @ diff) * size * ck.size / ((size + ck.size) * n)
                w = (n1.get(k) or n2.get(k))[1]
            nbrs[k].pop(i, None)
            nbrs[k].pop(j, None)
            nbrs[new][k] = [ds_new, w]
            nbrs[k][new] = [ds_new, w]
            heapq.heappush(heap, (ds_new, min(new, k), max(new, k)))

    # replay merges up to the best cut
    parent = list(range(n + len(merges)))
    for i, j, new in merges[:best_step]:
        parent[i] = new
        parent[j] = new

    def root(v):
        while parent[v] != v:
            v = parent[v]
        return v

    raw = [root(v) for v in range(n)]
    _, labels = np.unique(raw, return_inverse=True)
    return labels.astype(np.int64), best_q


def walktrap(view: TopicFlowNetwork, walk_length: int = WALK_LENGTH) -> CommunityPartition:
    """Partition the authors of a single-year view.

    Works on the undirected simple projection (parallel topic edges summed,
    direction and self-loops dropped). Authors without collaborations end up
    as singleton blocks. Blocks are ordered by size, then by first member.
    """
    adj = undirected_weighted(view)
    labels, q = walktrap_labels(adj, walk_length)
    groups: dict[int, list[str]] = {}
    for a, lab in zip(view.authors, labels):
        groups.setdefault(int(lab), []).append(a)
    blocks = sorted((tuple(sorted(g)) for g in groups.values()), key=lambda b: (-len(b), b[0]))
    year = view.years[0] if len(view.years) == 1 else None
    return CommunityPartition(year, tuple(blocks), q)


@dataclass(frozen=True)
class BlockSummary:
    block_id: int
    size: int
    topics: tuple[tuple[int, int], ...]  # (topic, member count), most frequent first

    @property
    def main_topic(self) -> int | None:
        return self.topics[0][0] if self.topics else None


@dataclass(frozen=True)
class CommunitySummary:
    blocks: tuple[BlockSummary, ...]
    topic_sizes: dict[int, int] = field(default_factory=dict)


def community_topic_summary(
    partition: CommunityPartition,
    expertise: ExpertiseTable,
    top_m: int = 2,
    year: int | None = None,
) -> CommunitySummary:
    """Main-topic frequencies of every block with at least two members.

    ``topic_sizes`` sums block sizes per block main topic.
    """
    year = partition.year if year is None else year
    out = []
    topic_sizes: Counter = Counter()
    for bid, block in enumerate(partition.blocks):
        if len(block) < 2:
            continue
        counts = Counter()
        for a in block:
            t = main_topic(expertise, a, year)
            if t is not None:
                counts[t] += 1
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_m]
        summary = BlockSummary(bid, len(block), tuple(ranked))
        if summary.main_topic is not None:
            topic_sizes[summary.main_topic] += summary.size
        out.append(summary)
    return CommunitySummary(tuple(out), dict(sorted(topic_sizes.items())))
