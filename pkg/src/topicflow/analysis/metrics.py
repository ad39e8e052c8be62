"""Average shortest path and average local clustering of a TFN view."""
import numpy as np
import scipy.sparse as sp

from .._kernels import hop_distance_sum, largest_component, local_clustering
from ..tfn import TopicFlowNetwork
from ._graph import active_nodes, undirected_weighted


def simple_graph(view: TopicFlowNetwork) -> sp.csr_matrix:
    """Unweighted undirected simple graph over the view's active authors."""
    nodes = active_nodes(view)
    a = undirected_weighted(view)[nodes][:, nodes].tocsr()
    a.data[:] = 1.0
    a.eliminate_zeros()
    a.sort_indices()
    return a


def small_world_metrics(view: TopicFlowNetwork) -> tuple[float | None, float]:
    """``(ASP, ALC)`` of the undirected simple projection.

    Nodes are the authors with at least one edge (self-loops included) in the
    view. ALC averages local clustering over all of them, nodes of degree < 2
    counting as 0. ASP is the mean hop distance over node pairs of the largest
    connected component, ``None`` when that component has fewer than 2 nodes.
    """
    a = simple_graph(view)
    n = a.shape[0]
    if n == 0:
        return None, 0.0
    alc = float(local_clustering(a.indptr, a.indices).mean())
    comp = largest_component(a.indptr, a.indices)
    m = len(comp)
    if m < 2:
        return None, alc
    total = hop_distance_sum(a.indptr, a.indices, comp)
    return total / (m * (m - 1)), alc
