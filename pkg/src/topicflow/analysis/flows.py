"""Intra- and intertopic flow matrices."""
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from ..tfn import ExpertiseTable, TopicFlowNetwork, main_topics

TOP_FLOWS = 25


@dataclass(frozen=True)
class FlowMatrix:
    year: int
    values: np.ndarray  # values[t1, t2]: flow on topic t1 from main-topic-t1 into main-topic-t2 authors

    @property
    def n_topics(self) -> int:
        return self.values.shape[0]


def flow_matrix(tfn: TopicFlowNetwork, expertise: ExpertiseTable, year: int) -> FlowMatrix:
    """Aggregate t1-edges by the main topics of their endpoints.

    Authors without a main topic are left out. Self-loops of a main-topic-t
    author land on the diagonal entry (t, t).
    """
    if year not in tfn.years:
        raise ParameterError(f"year {year} not in network")
    n = tfn.n_topics
    tau = main_topics(expertise, year)
    label = np.full(len(tfn.authors), -1, dtype=np.int64)
    aidx = tfn.author_index()
    for a, t in tau.items():
        label[aidx[a]] = t
    phi = np.zeros((n, n))
    for (y, t1), rel in tfn.edges.items():
        if y != year:
            continue
        ls, ld = label[rel.source], label[rel.target]
        keep = (ls == t1) & (ld >= 0)
        if keep.any():
            phi[t1] += np.bincount(ld[keep], weights=rel.weight[keep], minlength=n)
    return FlowMatrix(year, phi)


def top_flows(matrix: FlowMatrix, k: int = TOP_FLOWS, exclude_intra: bool = True) -> list[tuple[int, int, float]]:
    """Largest positive entries, descending; ties go to the lower (t1, t2)."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    v = matrix.values
    cells = [
        (t1, t2, float(v[t1, t2]))
        for t1, t2 in zip(*np.nonzero(v > 0))
        if not (exclude_intra and t1 == t2)
    ]
    cells.sort(key=lambda c: (-c[2], c[0], c[1]))
    return [(int(a), int(b), w) for a, b, w in cells[:k]]
