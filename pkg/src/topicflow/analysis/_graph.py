"""Projections of TFN views onto plain graphs."""
import numpy as np
import scipy.sparse as sp

from ..tfn import TopicFlowNetwork


def edge_arrays(view: TopicFlowNetwork, include_loops: bool = False):
    """Concatenated ``(source, target, weight)`` over all relations of ``view``."""
    keys = sorted(view.edges)
    if not keys:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, np.empty(0)
    src = np.concatenate([view.edges[k].source for k in keys])
    dst = np.concatenate([view.edges[k].target for k in keys])
    w = np.concatenate([view.edges[k].weight for k in keys])
    if not include_loops:
        keep = src != dst
        src, dst, w = src[keep], dst[keep], w[keep]
    return src, dst, w


def undirected_weighted(view: TopicFlowNetwork) -> sp.csr_matrix:
    """Symmetric simple graph: loops dropped, direction dropped, weights summed."""
    n = len(view.authors)
    src, dst, w = edge_arrays(view)
    a = sp.coo_matrix((w, (src, dst)), shape=(n, n)).tocsr()
    a = (a + a.T).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    return a


def undirected_multiplicity(view: TopicFlowNetwork) -> sp.csr_matrix:
    """Symmetric integer matrix counting parallel (non-loop) edges per pair."""
    n = len(view.authors)
    src, dst, w = edge_arrays(view)
    keep = w > 0
    src, dst = src[keep], dst[keep]
    ones = np.ones(len(src), dtype=np.int64)
    a = sp.coo_matrix((ones, (src, dst)), shape=(n, n)).tocsr()
    a = (a + a.T).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    return a


def active_nodes(view: TopicFlowNetwork) -> np.ndarray:
    """Authors touched by any edge of the view, self-loops included."""
    src, dst, _ = edge_arrays(view, include_loops=True)
    return np.unique(np.concatenate([src, dst]))
