"""Compiled vs pure-Python one-pass kernel.

    python3 benchmarks/bench_kernel.py [--sizes 500 1000 2000] [--k 10] [--reps 5]

Two tables.  ``pipeline`` times ``compute_k_cluster`` end to end on
complete Euclidean graphs of uniform points (sorting and early exit
included).  ``kernel`` feeds presorted edges of sparse random graphs
(mean degree 8) straight to each backend, so the union-find loop is all
that is measured.  Both backends are checked to agree on every input.
"""

import argparse
import time

import numpy as np

from kcluster import kernel
from kcluster.filtration import compute_k_cluster
from kcluster.graph import PointCloud, WeightedGraph, point_cloud_to_graph, sort_edges


def best_of(fn, reps):
    out = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t0)
    return out


def sparse_graph(n, degree, rng):
    m = n * degree // 2
    u, v = rng.integers(0, n, m), rng.integers(0, n, m)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    keep = lo != hi
    keys = np.unique(lo[keep] * n + hi[keep])
    return WeightedGraph(n, keys // n, keys % n, rng.random(len(keys)))


def row(label, n, m, times):
    cols = " ".join(f"{t * 1e3:9.2f}ms" for t in times)
    speed = f"{times[0] / times[-1]:7.1f}x" if len(times) > 1 else ""
    print(f"{label:>8} {n:>7} {m:>9} {cols} {speed}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 1000, 2000])
    ap.add_argument("--sparse-sizes", type=int, nargs="+", default=[10_000, 50_000, 200_000])
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernel.OnePassCy is not None else [])
    if len(backends) == 1:
        print("compiled kernel unavailable; timing the Python backend only")
    rng = np.random.default_rng(args.seed)
    print(f"{'stage':>8} {'n':>7} {'edges':>9} " + " ".join(f"{b:>11}" for b in backends) + f" {'speedup':>8}")

    for n in args.sizes:
        g = point_cloud_to_graph(PointCloud(rng.random((n, 2))))
        ref = compute_k_cluster(g, args.k, backend="python").diagram
        assert all(compute_k_cluster(g, args.k, backend=b).diagram.same_as(ref) for b in backends)
        row("pipeline", n, g.n_edges, [best_of(lambda b=b: compute_k_cluster(g, args.k, backend=b), args.reps) for b in backends])

    for n in args.sparse_sizes:
        g = sparse_graph(n, 8, rng)
        order = sort_edges(g)
        su, sv, sw = g.u[order], g.v[order], g.w[order]
        outs, times = [], []
        for b in backends:
            cls = kernel.get(b)

            def run(cls=cls):
                op = cls(n, args.k)
                op.feed(su, sv, sw, order)
                return op.result()

            outs.append(run())
            times.append(best_of(run, args.reps))
        assert all(np.array_equal(outs[0][0], o[0]) for o in outs)
        row("kernel", n, g.n_edges, times)


if __name__ == "__main__":
    main()
