"""Time each hot kernel on its numba path and its pure-numpy path.

    python3 benchmarks/bench_kernels.py [--nodes 2000] [--repeat 5]

The numba column is skipped when numba is missing. Both paths are checked
for agreement before timing; compile time is excluded by a warm-up call.
"""
import argparse
import time

import numpy as np
import scipy.sparse as sp

from topicflow import _kernels as K
from topicflow._accel import HAVE_NUMBA


def random_graph(n, avg_deg, seed):
    rng = np.random.default_rng(seed)
    m = n * avg_deg // 2
    u, v = rng.integers(0, n, m), rng.integers(0, n, m)
    keep = u != v
    a = sp.coo_matrix((np.ones(keep.sum(), dtype=np.int64), (u[keep], v[keep])), shape=(n, n)).tocsr()
    a = (a + a.T).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    return a


def cases(n, seed):
    multi = random_graph(n, 8, seed)
    simple = multi.copy()
    simple.data[:] = 1
    ip, ix = simple.indptr.astype(np.int64), simple.indices.astype(np.int64)
    w = multi.astype(float)
    out = np.asarray(w.sum(axis=1)).ravel()
    prob = sp.diags(np.divide(1.0, out, out=np.zeros_like(out), where=out > 0)) @ w
    prob = prob.tocsr()
    prob.sort_indices()
    comp = K.largest_component(ip, ix)
    return {
        "pagerank": ((K._pagerank_nb, K._pagerank_np),
                     (prob.indptr.astype(np.int64), prob.indices.astype(np.int64), prob.data, out == 0, 0.85, 100, 1e-10)),
        "k-cores": ((K._cores_nb, K._cores_np), (multi.indptr.astype(np.int64), multi.indices.astype(np.int64), multi.data)),
        "clustering": ((K._clustering_nb, K._clustering_np), (ip, ix)),
        "hop sums": ((K._hop_sum_nb, K._hop_sum_np), (ip, ix, comp)),
    }


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, atol=1e-12, rtol=0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print(f"{'kernel':<12}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, ((nb, npy), kargs) in cases(args.nodes, args.seed).items():
        t_np = best_of(npy, kargs, args.repeat)
        if HAVE_NUMBA:
            assert same(nb(*kargs), npy(*kargs)), name  # warm-up doubles as agreement check
            t_nb = best_of(nb, kargs, args.repeat)
            print(f"{name:<12}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<12}{t_np:>12.4f}{'n/a':>12}{'':>10}")


if __name__ == "__main__":
    main()
