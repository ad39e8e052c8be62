import numpy as np
import pytest
import scipy.sparse as sp

from conftest import make_corpus, make_view
from oracles import (
    best_partition_exhaustive,
    bfs_asp_alc,
    dense_pagerank,
    flow_row_sums,
    modularity_dense,
    peeling_core_numbers,
    random_instance,
)
from test_tfn import instance_tfn
from topicflow.analysis import (
    community_topic_summary,
    core_numbers,
    coreness,
    coreness_grid,
    flow_matrix,
    modularity,
    pagerank,
    small_world_metrics,
    top_flows,
    walktrap,
)
from topicflow.analysis.flows import FlowMatrix
from topicflow.analysis.kcore import grid_array
from topicflow.analysis.walktrap import CommunityPartition, walktrap_labels
from topicflow.errors import ParameterError
from topicflow.tfn import build_tfn, restrict

MINI_PHI = np.array([[1.4, 0.8], [0.2, 2.9]])


def scores_array(view, scores):
    return np.array([scores[a] for a in view.authors])


# -- PageRank ---------------------------------------------------------------------


def test_pagerank_symmetric_pair():
    v = make_view(2, [(0, 1, 1.0), (1, 0, 1.0)])
    assert list(pagerank(v).values()) == [0.5, 0.5]


def test_pagerank_path_order():
    # expertise flows a -> b -> c; after flipping, rank accumulates at a
    v = make_view(3, [(0, 1, 1.0), (1, 2, 1.0)])
    s = scores_array(v, pagerank(v))
    assert s[0] > s[1] > s[2]
    np.testing.assert_allclose(s, dense_pagerank(3, [(1, 0, 1.0), (2, 1, 1.0)]), atol=1e-10)


def test_pagerank_random_against_dense():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 60))
        edges = [(i, j, float(rng.random() + 0.01), int(rng.integers(0, 2)))
                 for i in range(n) for j in range(n) if rng.random() < 0.08]
        v = make_view(n, edges, n_topics=2)
        s = scores_array(v, pagerank(v))
        assert abs(s.sum() - 1.0) <= 1e-9
        assert np.all(s >= 0)
        np.testing.assert_allclose(s, dense_pagerank(n, [(d, a, w) for a, d, w, _ in edges]), atol=1e-8, rtol=0)


def test_pagerank_scale_invariant_and_loops_ignored():
    edges = [(0, 1, 2.0), (1, 2, 0.5), (2, 0, 1.0), (0, 2, 3.0)]
    a = pagerank(make_view(3, edges))
    b = pagerank(make_view(3, [(s, d, 7.5 * w) for s, d, w in edges] + [(1, 1, 9.0)]))
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-12)


def test_pagerank_errors():
    with pytest.raises(ParameterError):
        pagerank(make_view(0, []))
    with pytest.raises(ParameterError):
        pagerank(make_view(2, []), damping=1.0)


def test_pagerank_no_edges_uniform():
    s = pagerank(make_view(4, []))
    np.testing.assert_allclose(list(s.values()), 0.25, atol=1e-15)


# -- Walktrap -----------------------------------------------------------------------

TWO_TRIANGLES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]


def test_walktrap_two_triangles():
    v = make_view(6, [(a, b, 1.0) for a, b in TWO_TRIANGLES])
    part = walktrap(v)
    assert sorted(part.blocks) == [("n000", "n001", "n002"), ("n003", "n004", "n005")]
    adj = np.zeros((6, 6))
    for a, b in TWO_TRIANGLES:
        adj[a, b] = adj[b, a] = 1
    best, best_q = best_partition_exhaustive(adj)
    assert sorted(map(sorted, best)) == [[0, 1, 2], [3, 4, 5]]
    assert part.modularity == pytest.approx(best_q, abs=1e-12)


def test_walktrap_clique_and_empty():
    v = make_view(5, [(i, j, 1.0) for i in range(5) for j in range(i + 1, 5)])
    assert walktrap(v).blocks == (tuple(f"n{i:03d}" for i in range(5)),)
    iso = walktrap(make_view(3, []))
    assert iso.sizes() == [1, 1, 1]
    assert walktrap(make_view(0, [])).blocks == ()


def test_walktrap_isolated_nodes_are_singletons():
    v = make_view(8, [(a, b, 1.0) for a, b in TWO_TRIANGLES])
    part = walktrap(v)
    assert part.sizes() == [3, 3, 1, 1]


def test_walktrap_direction_and_parallel_edges_merge():
    a = walktrap(make_view(6, [(a, b, 1.0) for a, b in TWO_TRIANGLES]))
    b = walktrap(make_view(6, [(b, a, 0.5, 0) for a, b in TWO_TRIANGLES] + [(a, b, 0.5, 1) for a, b in TWO_TRIANGLES], n_topics=2))
    assert a.blocks == b.blocks


def test_walktrap_beats_single_block_and_is_repeatable():
    for seed in range(15):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 25))
        edges = [(i, j, float(rng.random())) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.2]
        v = make_view(n, edges)
        part = walktrap(v)
        adj = np.zeros((n, n))
        for i, j, w in edges:
            adj[i, j] += w
            adj[j, i] += w
        if adj.sum() == 0:
            continue
        labels = [part.membership()[a] for a in v.authors]
        assert modularity_dense(adj, labels) >= modularity_dense(adj, [0] * n) - 1e-12
        assert part.modularity == pytest.approx(modularity_dense(adj, labels), abs=1e-9)
        assert walktrap(v) == part


def test_walktrap_labels_rejects_bad_length():
    with pytest.raises(ValueError):
        walktrap_labels(sp.csr_matrix((2, 2)), 0)


def test_modularity_matches_dense():
    rng = np.random.default_rng(1)
    a = rng.random((7, 7)) * (rng.random((7, 7)) < 0.5)
    a = a + a.T
    np.fill_diagonal(a, 0)
    labels = rng.integers(0, 3, 7)
    assert modularity(sp.csr_matrix(a), labels) == pytest.approx(modularity_dense(a, labels), abs=1e-12)


def test_community_summary(mini):
    corpus, theta = mini
    net = build_tfn(corpus, theta, [2000], window=0)
    part = CommunityPartition(2000, (("a", "b", "c"), ("zed",)), 0.0)
    s = community_topic_summary(part, net.expertise, top_m=2)
    assert len(s.blocks) == 1
    assert s.blocks[0].topics == ((1, 2), (0, 1))
    assert s.blocks[0].main_topic == 1
    assert s.topic_sizes == {1: 3}


def test_community_summary_undefined_topics_and_sizes(mini):
    corpus, theta = mini
    exp = build_tfn(corpus, theta, [2000], window=0).expertise
    part = CommunityPartition(2000, (("x", "y"),), 0.0)
    s = community_topic_summary(part, exp)
    assert s.blocks[0].topics == () and s.blocks[0].size == 2
    part = CommunityPartition(2000, (("b", "c", "x"), ("b", "c", "y", "z")), 0.0)
    assert community_topic_summary(part, exp).topic_sizes == {1: 7}


# -- k-cores --------------------------------------------------------------------------


def test_core_numbers_basic():
    assert set(core_numbers(make_view(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])).values()) == {2}
    par = make_view(2, [(0, 1, 1.0, t) for t in range(3)], n_topics=3)
    assert core_numbers(par) == {"n000": 3, "n001": 3}
    assert core_numbers(make_view(2, [(0, 1, 1.0)]))["n000"] == 1
    assert core_numbers(make_view(3, [(0, 1, 1.0)]))["n002"] == 0


def test_doubled_clique_coreness():
    edges = [(i, j, 1.0, t) for t in range(2) for i in range(4) for j in range(i + 1, 4)]
    assert coreness(make_view(4, edges, n_topics=2)) == 6


def test_self_loops_not_counted():
    assert coreness(make_view(2, [(0, 0, 5.0), (0, 1, 1.0)])) == 1


def test_core_numbers_against_peeling():
    for seed in range(25):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 40))
        multi = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.15:
                    multi += [(i, j)] * int(rng.integers(1, 4))
        edges = [(u, v, 1.0, k) for k, (u, v) in enumerate(multi)]
        view = make_view(n, edges, n_topics=max(1, len(edges)))
        got = [core_numbers(view)[a] for a in view.authors]
        assert got == peeling_core_numbers(n, multi)


def test_coreness_grid_mini(mini):
    corpus, theta = mini
    net = build_tfn(corpus, theta, [2000], window=0)
    grid = coreness_grid(net)
    assert grid[(0, 2000)] == 1
    assert grid_array(grid, 2, [2000]).tolist() == [[1], [1]]
    c = make_view(2, [])
    assert coreness(c) == 0


# -- flows -------------------------------------------------------------------------------


def test_flow_matrix_mini(mini):
    corpus, theta = mini
    net = build_tfn(corpus, theta, [2000], window=0)
    fm = flow_matrix(net, net.expertise, 2000)
    np.testing.assert_allclose(fm.values, MINI_PHI, atol=1e-9)
    with pytest.raises(ParameterError):
        flow_matrix(net, net.expertise, 1999)


def test_flow_single_author_and_empty():
    c = make_corpus([("p", 2000, ["a"])])
    net = build_tfn(c, {"p": np.array([0.3, 0.7])}, [2000])
    # only main-topic (t=1) edges leave cluster 1, so the t=0 self-loop is not a flow
    np.testing.assert_allclose(flow_matrix(net, net.expertise, 2000).values, np.diag([0.0, 0.7]))
    net = build_tfn(c, {"p": np.zeros(2)}, [2000])
    assert not flow_matrix(net, net.expertise, 2000).values.any()


def test_flow_row_sums_against_direct_summation():
    for seed in range(100):
        net, oracle, expertise = instance_tfn(seed)
        for y in net.years:
            fm = flow_matrix(net, net.expertise, y)
            assert np.all(fm.values >= 0) and np.all(np.isfinite(fm.values))
            want = flow_row_sums(oracle, expertise, y, net.n_topics)
            np.testing.assert_allclose(fm.values.sum(axis=1), want, atol=1e-9, rtol=0)


def test_top_flows():
    fm = FlowMatrix(2000, MINI_PHI.copy())
    assert top_flows(fm, 25) == [(0, 1, 0.8), (1, 0, 0.2)]
    assert top_flows(fm, 1, exclude_intra=False) == [(1, 1, 2.9)]
    assert top_flows(FlowMatrix(2000, np.zeros((3, 3)))) == []
    ties = FlowMatrix(2000, np.array([[0, 1.0, 1.0], [1.0, 0, 0], [0, 0, 0]]))
    assert top_flows(ties, 2) == [(0, 1, 1.0), (0, 2, 1.0)]
    with pytest.raises(ParameterError):
        top_flows(fm, 0)


# -- small-world metrics ----------------------------------------------------------------


def test_metrics_fixtures():
    tri = make_view(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    assert small_world_metrics(tri) == (1.0, 1.0)
    path = make_view(3, [(0, 1, 1.0), (1, 2, 1.0)])
    asp, alc = small_world_metrics(path)
    assert alc == 0.0 and asp == pytest.approx(4 / 3, abs=1e-15)
    two = make_view(4, [(0, 1, 1.0), (2, 3, 1.0)])
    assert small_world_metrics(two) == (1.0, 0.0)


def test_metrics_degenerate():
    assert small_world_metrics(make_view(3, [])) == (None, 0.0)
    assert small_world_metrics(make_view(2, [(0, 0, 1.0)])) == (None, 0.0)


def test_metrics_against_bfs_oracle():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 30))
        edges = [(i, j, 1.0, int(rng.integers(0, 2))) for i in range(n) for j in range(n)
                 if i != j and rng.random() < 0.1]
        v = make_view(n, edges, n_topics=2)
        nodes = sorted({e[0] for e in edges} | {e[1] for e in edges})
        want = bfs_asp_alc(nodes, [(e[0], e[1]) for e in edges])
        got = small_world_metrics(v)
        assert (got[0] is None) == (want[0] is None)
        if want[0] is not None:
            assert got[0] == pytest.approx(want[0], abs=1e-12)
        assert got[1] == pytest.approx(want[1], abs=1e-12)


def test_analyses_are_repeatable():
    net, _, _ = instance_tfn(3)
    y = net.years[0]
    view = restrict(net, y)
    assert pagerank(view) == pagerank(view)
    assert core_numbers(view) == core_numbers(view)
    assert np.array_equal(flow_matrix(net, net.expertise, y).values, flow_matrix(net, net.expertise, y).values)


def test_random_instance_shape():
    papers, theta, k, window, top_l = random_instance(0)
    assert 1 <= len(papers) <= 10 and 1 <= k <= 4 and 1 <= top_l <= k and 0 <= window <= 2
