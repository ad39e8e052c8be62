"""Weighted PageRank on flipped TFN edges."""
import logging

import numpy as np
import scipy.sparse as sp

from .._kernels import pagerank_power
from ..errors import ParameterError
from ..tfn import TopicFlowNetwork
from ._graph import edge_arrays

log = logging.getLogger(__name__)

DAMPING = 0.85
MAX_ITER = 100
TOL = 1e-10


def flipped_transition(view: TopicFlowNetwork) -> sp.csr_matrix:
    """Row-stochastic matrix of the reversed, topic-collapsed, loop-free view."""
    n = len(view.authors)
    src, dst, w = edge_arrays(view)
    # expertise flows a -> b; rank flows back b -> a
    a = sp.coo_matrix((w, (dst, src)), shape=(n, n)).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    out = np.asarray(a.sum(axis=1)).ravel()
    scale = np.divide(1.0, out, out=np.zeros(n), where=out > 0)
    return sp.diags(scale) @ a


def pagerank(
    view: TopicFlowNetwork,
    damping: float = DAMPING,
    max_iter: int = MAX_ITER,
    tol: float = TOL,
) -> dict[str, float]:
    """PageRank scores of all authors in ``view``.

    Edges are reversed before ranking, so authors who pass expertise on to many
    collaborators accumulate score. Parallel edges are merged by summing their
    weights and self-loops are ignored. Teleportation is uniform and dangling
    nodes spread their mass uniformly. Stops once the L1 change of a sweep is
    below ``tol`` or after ``max_iter`` sweeps.
    """
    if not 0.0 < damping < 1.0:
        raise ParameterError("damping must lie in (0, 1)")
    n = len(view.authors)
    if n == 0:
        raise ParameterError("empty node set")
    m = flipped_transition(view).tocsr()
    m.sort_indices()
    dangling = np.diff(m.indptr) == 0
    x, it = pagerank_power(m.indptr, m.indices, m.data, dangling, damping, max_iter, tol)
    if it >= max_iter:
        log.warning("pagerank stopped at max_iter=%d before reaching tol=%g", max_iter, tol)
    x = x / x.sum()
    return dict(zip(view.authors, (float(v) for v in x)))


def ranked(scores: dict[str, float]) -> list[tuple[str, float]]:
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
