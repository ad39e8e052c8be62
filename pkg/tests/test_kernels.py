import numpy as np
import pytest
import scipy.sparse as sp

from topicflow import _kernels as K
from topicflow._accel import HAVE_NUMBA, numba_enabled


def random_sym(seed, n, p=0.15, maxmult=3):
    rng = np.random.default_rng(seed)
    upper = np.triu((rng.random((n, n)) < p) * rng.integers(1, maxmult + 1, (n, n)), 1)
    a = sp.csr_matrix(upper + upper.T)
    a.sort_indices()
    return a


def random_transition(seed, n):
    rng = np.random.default_rng(seed)
    w = (rng.random((n, n)) < 0.1) * rng.random((n, n))
    np.fill_diagonal(w, 0)
    out = w.sum(axis=1)
    p = sp.csr_matrix(np.divide(w, out[:, None], out=np.zeros_like(w), where=out[:, None] > 0))
    p.sort_indices()
    return p, out == 0


def test_env_flag(monkeypatch):
    monkeypatch.setenv("TOPICFLOW_DISABLE_NUMBA", "1")
    assert not numba_enabled()
    monkeypatch.setenv("TOPICFLOW_DISABLE_NUMBA", "0")
    assert numba_enabled() == HAVE_NUMBA


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", range(8))
def test_pagerank_paths_agree(seed):
    p, dangling = random_transition(seed, 5 + 10 * seed)
    args = (p.indptr.astype(np.int64), p.indices.astype(np.int64), p.data, dangling, 0.85, 100, 1e-10)
    xn, itn = K._pagerank_nb(*args)
    xp, itp = K._pagerank_np(*args)
    assert itn == itp
    np.testing.assert_allclose(xn, xp, atol=1e-14, rtol=0)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", range(8))
def test_core_paths_agree(seed):
    a = random_sym(seed, 3 + 7 * seed)
    args = (a.indptr.astype(np.int64), a.indices.astype(np.int64), a.data.astype(np.int64))
    assert K._cores_nb(*args).tolist() == K._cores_np(*args).tolist()


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", range(8))
def test_clustering_and_hops_agree(seed):
    a = random_sym(seed, 2 + 6 * seed, p=0.2, maxmult=1)
    ip, ix = a.indptr.astype(np.int64), a.indices.astype(np.int64)
    np.testing.assert_allclose(K._clustering_nb(ip, ix), K._clustering_np(ip, ix), atol=1e-15)
    comp = K.largest_component(ip, ix)
    assert K._hop_sum_nb(ip, ix, comp) == K._hop_sum_np(ip, ix, comp)


def test_dispatch_follows_flag(monkeypatch):
    a = random_sym(3, 20)
    want = K.core_numbers_csr(a.indptr, a.indices, a.data)
    monkeypatch.setenv("TOPICFLOW_DISABLE_NUMBA", "1")
    assert K.core_numbers_csr(a.indptr, a.indices, a.data).tolist() == want.tolist()


def test_largest_component_tie_lowest_label():
    a = sp.csr_matrix(np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))
    assert K.largest_component(a.indptr, a.indices).tolist() == [0, 1]
