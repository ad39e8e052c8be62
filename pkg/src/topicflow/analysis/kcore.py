"""Core numbers on TFN multigraphs and the topic-by-year coreness grid."""
import numpy as np

from .._kernels import core_numbers_csr
from ..tfn import TopicFlowNetwork, restrict
from ._graph import undirected_multiplicity


def core_numbers(view: TopicFlowNetwork) -> dict[str, int]:
    """Core number of every author in ``view``.

    A node's degree is the number of incident non-loop edges summed over all
    edge relations of the view, so parallel topic edges and the two directions
    of a tied edge each count once.
    """
    a = undirected_multiplicity(view)
    if len(view.authors) == 0:
        return {}
    cores = core_numbers_csr(a.indptr, a.indices, a.data)
    return dict(zip(view.authors, (int(c) for c in cores)))


def coreness(view: TopicFlowNetwork) -> int:
    cores = core_numbers(view)
    return max(cores.values(), default=0)


def coreness_grid(tfn: TopicFlowNetwork) -> dict[tuple[int, int], int]:
    """``(topic, year) -> coreness`` for every topic and year of ``tfn``."""
    grid = {}
    for y in tfn.years:
        for t in range(tfn.n_topics):
            grid[(t, y)] = coreness(restrict(tfn, y, t)) if (y, t) in tfn.edges else 0
    return grid


def grid_array(grid: dict[tuple[int, int], int], n_topics: int, years) -> np.ndarray:
    years = list(years)
    out = np.zeros((n_topics, len(years)), dtype=np.int64)
    for j, y in enumerate(years):
        for t in range(n_topics):
            out[t, j] = grid.get((t, y), 0)
    return out
