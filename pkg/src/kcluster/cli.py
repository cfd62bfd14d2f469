"""Command-line front end: ``kcluster {pd,cluster,degree,simulate,universality,sample}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import random_models as rm
from .clustering import choose_threshold, extract_clusters, write_labels
from .filtration import compute_k_cluster, k_degree_diagram, write_diagram, write_filtration, write_msf
from .graph import InputError, WeightedGraph, fmt, parse_mode, point_cloud_to_graph, read_edge_list, read_point_cloud, write_point_cloud
from .stats import significant_clusters

DEFAULT_SEED = 20240101


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _load_graph(args) -> WeightedGraph:
    if args.points:
        pc = read_point_cloud(args.input, metric=args.metric, side=args.side)
        kind, m = parse_mode(args.mode)
        if kind == "knn":
            print(
                "warning: knn mode only matches the complete graph when it contains the minimum spanning tree",
                file=sys.stderr,
            )
        return point_cloud_to_graph(pc, kind, m)
    if args.metric != "euclidean" or args.mode != "complete":
        raise InputError("--metric/--mode apply to point clouds only (add --points)")
    return read_edge_list(args.input, n_vertices=args.n_vertices)


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_pd(args):
    g = _load_graph(args)
    res = compute_k_cluster(g, args.k, keep_diagonal=args.keep_diagonal)
    out = _outdir(args.out)
    write_diagram(out / "diagram.csv", res.diagram)
    write_filtration(out / "filtration.csv", res.filtration)
    write_msf(out / "mst.csv", res.msf)


def cmd_degree(args):
    g = _load_graph(args)
    dgm, f = k_degree_diagram(g, args.k)
    out = _outdir(args.out)
    write_diagram(out / "diagram.csv", dgm)
    write_filtration(out / "filtration.csv", f)


def cmd_cluster(args):
    chosen = [x is not None for x in (args.alpha, args.num_clusters, args.gamma)]
    if sum(chosen) > 1:
        raise InputError("give only one of --alpha, --num-clusters, --gamma")
    if args.alpha is not None and args.alpha < 1:
        raise InputError("--alpha must be >= 1")
    g = _load_graph(args)
    res = compute_k_cluster(g, args.k)
    report = None
    if args.alpha is not None:
        alpha = args.alpha
    else:
        if args.num_clusters is not None:
            count = args.num_clusters
        else:
            gamma = 0.05 if args.gamma is None else args.gamma
            report = significant_clusters(res.diagram, gamma, args.max_tested)
            count = report.cluster_count
        try:
            alpha = choose_threshold(res.diagram, count)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    labels = extract_clusters(res.msf, res.filtration, alpha)
    out = _outdir(args.out)
    write_labels(out / "labels.csv", labels, header=f"k={args.k} alpha={fmt(alpha)} clusters={labels.num_clusters}")
    write_diagram(out / "diagram.csv", res.diagram)
    if report is not None:
        report.write(out / "report.json")


def _ll(n):
    return math.log(math.log(n))


def cmd_simulate(args):
    seed = args.seed
    if args.model == "gnp":
        n = int(args.n or 2**13)
        crit = rm.connectivity_threshold_formula(n, args.k)
        grid = _floats(args.grid) if args.grid else [crit + c * _ll(n) for c in np.linspace(-2, 2, 9)]
        res = rm.run_connectivity_experiment(n, args.k, grid, args.trials, seed)
    elif args.model == "rgg":
        n = args.n or 2**12
        crit = rm.nk_threshold_formula(n, args.d, args.k)
        grid = _floats(args.grid) if args.grid else [crit + c * _ll(n) for c in np.linspace(-2, 2, 9)]
        res = rm.run_nk_experiment(n, args.d, args.k, grid, args.trials, seed)
    elif args.model == "maxpi":
        grid = _floats(args.grid) if args.grid else [2.0**j for j in range(9, 14)]
        res = rm.max_pi_experiment(args.d, args.k, grid, args.trials, seed)
    elif args.model == "addone":
        if args.input:
            g = read_edge_list(args.input)
        else:
            n = int(args.n or 30)
            full = rm.gnp_weighted(n, seed)
            g = full.threshold(args.p)
        res = rm.add_one_cost_check(g, args.k, args.trials, seed)
    else:
        grid = _floats(args.grid) if args.grid else [8.0, 16.0, 32.0]
        res = rm.limiting_diagram_check(grid, args.d, args.k, args.trials, seed)
    out = _outdir(args.out)
    res.write_csv(out / "trials.csv")
    res.write_summary(out / "summary.json")
    print(json.dumps({k: v for k, v in res.summary().items() if k not in ("config",)}))


def cmd_universality(args):
    dists = [d.strip() for d in args.dists.split(",") if d.strip()]
    for d in dists:
        if d not in rm.SAMPLERS:
            raise InputError(f"unknown distribution {d!r}")
    samples = rm.universality_samples(dists, args.d, args.k, args.n, args.trials, args.seed)
    report = rm.universality_report(samples)
    report["config"] = {"dists": dists, "d": args.d, "k": args.k, "n": args.n, "trials": args.trials, "seed": args.seed}
    out = _outdir(args.out)
    with open(out / "values.csv", "w", encoding="utf-8") as fh:
        fh.write(f"# seed={args.seed} d={args.d} k={args.k} n={args.n} trials={args.trials}\n")
        fh.write("dist,kind,value\n")
        for name in dists:
            for kind in ("pi", "ell"):
                for x in samples[name][kind].tolist():
                    fh.write(f"{name},{kind},{fmt(x)}\n")
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    print(json.dumps(report))


def cmd_sample(args):
    pc = rm.sampler(args.kind, args.n, args.d, args.seed, centers=args.centers, noise=args.noise)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_point_cloud(out, pc, header=f"kind={args.kind} n={args.n} d={args.d} seed={args.seed}")


def _graph_args(p):
    p.add_argument("input", help="edge list (u,v,w per line) or point cloud with --points")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--points", action="store_true", help="input is a point cloud")
    p.add_argument("--metric", choices=["euclidean", "torus"], default="euclidean")
    p.add_argument("--side", type=float, default=1.0, help="torus side length")
    p.add_argument("--mode", default="complete", help="complete | knn=M")
    p.add_argument("--n-vertices", type=int, default=None)
    p.add_argument("--out", default="out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kcluster", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pd", help="k-cluster persistence diagram, filtration and MST")
    _graph_args(p)
    p.add_argument("--keep-diagonal", action="store_true")
    p.set_defaults(func=cmd_pd)

    p = sub.add_parser("degree", help="k-degree filtration and its diagram")
    _graph_args(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("cluster", help="persistence-based clustering")
    _graph_args(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--num-clusters", type=int)
    p.add_argument("--gamma", type=float, help="significance level (default 0.05 if no selector given)")
    p.add_argument("--max-tested", type=int, default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("simulate", help="Monte Carlo experiments on random models")
    p.add_argument("model", choices=["gnp", "rgg", "maxpi", "addone", "limitpd"])
    p.add_argument("input", nargs="?", help="edge list for addone (optional)")
    p.add_argument("--n", type=float, default=None)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--p", type=float, default=0.3, help="edge density for the addone random graph")
    p.add_argument("--grid", default=None, help="comma-separated Lambda values, rates, or box sides")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("universality", help="pi/ell distributions across sampling distributions")
    p.add_argument("--dists", default="uniform,normal,exponential")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_universality)

    p = sub.add_parser("sample", help="write a sampled point cloud")
    p.add_argument("kind", choices=list(rm.SAMPLERS))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--centers", type=int, default=3)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="points.csv")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 1) < 1:
        print("error: --k must be >= 1", file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", category=UserWarning)
            args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
