"""Hot graph kernels.

Every kernel exists twice: a loop version compiled with numba (``*_nb``) and a
vectorized numpy/scipy version (``*_np``). The public names dispatch on
:func:`topicflow._accel.numba_enabled` at call time. Graphs come in as CSR
arrays (``indptr``, ``indices``, per-entry values).
"""
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, shortest_path

from ._accel import njit, numba_enabled


# -- PageRank power iteration ------------------------------------------------

@njit
def _pagerank_nb(indptr, indices, prob, dangling, damping, max_iter, tol):
    n = indptr.shape[0] - 1
    x = np.full(n, 1.0 / n)
    nxt = np.empty(n)
    it = 0
    for it in range(1, max_iter + 1):
        dmass = 0.0
        for u in range(n):
            if dangling[u]:
                dmass += x[u]
        base = (1.0 - damping) / n + damping * dmass / n
        for v in range(n):
            nxt[v] = base
        for u in range(n):
            xu = damping * x[u]
            for k in range(indptr[u], indptr[u + 1]):
                nxt[indices[k]] += xu * prob[k]
        err = 0.0
        for v in range(n):
            err += abs(nxt[v] - x[v])
            x[v] = nxt[v]
        if err < tol:
            break
    return x, it


def _pagerank_np(indptr, indices, prob, dangling, damping, max_iter, tol):
    n = len(indptr) - 1
    src = np.repeat(np.arange(n), np.diff(indptr))
    x = np.full(n, 1.0 / n)
    it = 0
    for it in range(1, max_iter + 1):
        base = (1.0 - damping) / n + damping * x[dangling].sum() / n
        nxt = base + damping * np.bincount(indices, weights=x[src] * prob, minlength=n)
        err = np.abs(nxt - x).sum()
        x = nxt
        if err < tol:
            break
    return x, it


def pagerank_power(indptr, indices, prob, dangling, damping, max_iter, tol):
    """Power iteration on a row-stochastic CSR transition matrix.

    Rows flagged in ``dangling`` spread their mass uniformly. Returns the
    score vector and the number of sweeps performed.
    """
    fn = _pagerank_nb if numba_enabled() else _pagerank_np
    return fn(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(prob, dtype=np.float64),
        np.ascontiguousarray(dangling, dtype=np.bool_),
        float(damping),
        int(max_iter),
        float(tol),
    )


# -- multigraph core numbers ---------------------------------------------------

@njit
def _cores_nb(indptr, indices, mult):
    # Batagelj-Zaversnik bucket peeling; parallel edges lower the degree once each
    n = indptr.shape[0] - 1
    deg = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for k in range(indptr[u], indptr[u + 1]):
            deg[u] += mult[k]
    maxdeg = 0
    for u in range(n):
        if deg[u] > maxdeg:
            maxdeg = deg[u]
    bin_ = np.zeros(maxdeg + 2, dtype=np.int64)
    for u in range(n):
        bin_[deg[u]] += 1
    start = 0
    for d in range(maxdeg + 1):
        num = bin_[d]
        bin_[d] = start
        start += num
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    for u in range(n):
        pos[u] = bin_[deg[u]]
        vert[pos[u]] = u
        bin_[deg[u]] += 1
    for d in range(maxdeg, 0, -1):
        bin_[d] = bin_[d - 1]
    bin_[0] = 0
    for i in range(n):
        v = vert[i]
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            for _ in range(mult[k]):
                if deg[u] > deg[v]:
                    du = deg[u]
                    pu = pos[u]
                    pw = bin_[du]
                    w = vert[pw]
                    if u != w:
                        pos[u] = pw
                        vert[pu] = w
                        pos[w] = pu
                        vert[pw] = u
                    bin_[du] += 1
                    deg[u] -= 1
    return deg


def _cores_np(indptr, indices, mult):
    # level-by-level peeling: a node leaves the k-core once its surviving degree < k
    n = len(indptr) - 1
    adj = sp.csr_matrix((mult.astype(np.int64), indices, indptr), shape=(n, n))
    core = np.zeros(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    k = 0
    while alive.any():
        k += 1
        while True:
            deg = adj @ alive.astype(np.int64)
            drop = alive & (deg < k)
            if not drop.any():
                break
            alive &= ~drop
        core[alive] = k
    return core


def core_numbers_csr(indptr, indices, mult):
    """Core number of every node of an undirected multigraph.

    ``mult`` holds the multiplicity of each CSR entry; both directions of an
    edge must be present.
    """
    fn = _cores_nb if numba_enabled() else _cores_np
    return fn(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(mult, dtype=np.int64),
    )


# -- small-world statistics on simple undirected graphs ------------------------

@njit
def _clustering_nb(indptr, indices):
    n = indptr.shape[0] - 1
    out = np.zeros(n)
    mark = np.full(n, -1, dtype=np.int64)
    for u in range(n):
        d = indptr[u + 1] - indptr[u]
        if d < 2:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            mark[indices[k]] = u
        tri = 0
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            for j in range(indptr[v], indptr[v + 1]):
                if mark[indices[j]] == u:
                    tri += 1
        out[u] = tri / (d * (d - 1.0))
    return out


def _clustering_np(indptr, indices):
    n = len(indptr) - 1
    a = sp.csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
    closed = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()
    deg = np.diff(indptr).astype(float)
    out = np.zeros(n)
    ok = deg >= 2
    out[ok] = closed[ok] / (deg[ok] * (deg[ok] - 1.0))
    return out


def local_clustering(indptr, indices):
    fn = _clustering_nb if numba_enabled() else _clustering_np
    return fn(np.ascontiguousarray(indptr, dtype=np.int64), np.ascontiguousarray(indices, dtype=np.int64))


@njit
def _hop_sum_nb(indptr, indices, nodes):
    # BFS from each node of one component; returns sum of hop distances over ordered pairs
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    for s in nodes:
        for v in nodes:
            dist[v] = -1
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    total += dist[v]
                    queue[tail] = v
                    tail += 1
    return total


def _hop_sum_np(indptr, indices, nodes):
    n = len(indptr) - 1
    a = sp.csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
    sub = a[nodes][:, nodes]
    d = shortest_path(sub, method="D", unweighted=True, directed=False)
    return int(d.sum())


def hop_distance_sum(indptr, indices, nodes):
    fn = _hop_sum_nb if numba_enabled() else _hop_sum_np
    return fn(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(nodes, dtype=np.int64),
    )


def largest_component(indptr, indices) -> np.ndarray:
    """Node ids of the largest connected component (lowest label on size ties)."""
    n = len(indptr) - 1
    if n == 0:
        return np.empty(0, dtype=np.int64)
    a = sp.csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
    _, labels = connected_components(a, directed=False)
    sizes = np.bincount(labels)
    return np.flatnonzero(labels == int(np.argmax(sizes)))
