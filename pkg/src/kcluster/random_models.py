"""Random graph models, point samplers and Monte Carlo experiments.

G(n, p) is handled as the complete graph with iid Uniform[0, 1] edge
weights, and G(n, r) as the distance graph of a Poisson process on the
flat unit torus, so a single sample gives the whole filtration.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist

from .filtration import compute_k_cluster
from .graph import PointCloud, WeightedGraph, fmt, mst_supergraph
from .stats import ell_normalize, ks_distance, ks_two_sample, pi_values

SAMPLERS = ("uniform", "normal", "exponential", "blobs", "two-moons")


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    """Independent generators for each trial, all derived from one master seed."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in ss.spawn(trials)]


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


@dataclass(eq=False)
class ExperimentResult:
    """Per-trial measurements on a parameter grid (rows = trials)."""

    name: str
    config: dict
    grid: np.ndarray
    values: np.ndarray
    extra: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.values.shape[0]

    def mean(self) -> np.ndarray:
        return np.nanmean(self.values, axis=0)

    def stderr(self) -> np.ndarray:
        cnt = np.sum(~np.isnan(self.values), axis=0)
        return np.nanstd(self.values, axis=0, ddof=1) / np.sqrt(np.maximum(cnt, 1))

    def ci(self, z: float = 1.96) -> tuple[np.ndarray, np.ndarray]:
        m, s = self.mean(), self.stderr()
        return m - z * s, m + z * s

    def summary(self) -> dict:
        lo, hi = self.ci()
        out = {
            "experiment": self.name,
            "config": self.config,
            "grid": self.grid.tolist(),
            "mean": self.mean().tolist(),
            "ci_low": lo.tolist(),
            "ci_high": hi.tolist(),
        }
        out.update(self.extra)
        return out

    def write_csv(self, path):
        header = " ".join(f"{k}={v}" for k, v in self.config.items())
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# {self.name} {header}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["trial", "grid", "value"])
            for t in range(self.values.shape[0]):
                for g, x in zip(self.grid.tolist(), self.values[t].tolist()):
                    w.writerow([t, fmt(g), fmt(x)])

    def write_summary(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.summary(), fh, indent=1)
            fh.write("\n")


# -- generators ---------------------------------------------------------------


def _pairs_from_index(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # inverse of the row-major upper-triangle enumeration used by pdist
    idx = np.asarray(idx, dtype=np.int64)
    total = n * (n - 1) // 2
    i = n - 2 - np.floor(np.sqrt(-8.0 * idx + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5).astype(np.int64)
    start = total - (n - i) * (n - i - 1) // 2
    # guard against rounding at row boundaries
    low = idx < start
    i[low] -= 1
    start = total - (n - i) * (n - i - 1) // 2
    nxt = total - (n - i - 1) * (n - i - 2) // 2
    high = idx >= nxt
    i[high] += 1
    start = total - (n - i) * (n - i - 1) // 2
    j = idx - start + i + 1
    return i, j


def gnp_weighted(n: int, seed=None, max_weight: float = 1.0) -> WeightedGraph:
    """Complete graph with iid Uniform[0, 1] weights, truncated to ``w <= max_weight``.

    Thresholding at p gives G(n, p).  Truncation samples only the edges
    that can matter below ``max_weight``, with the exact joint law of the
    full graph restricted to that range.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    if max_weight >= 1.0:
        iu, iv = np.triu_indices(n, 1)
        return WeightedGraph(n, iu, iv, rng.random(total))
    m = rng.binomial(total, max_weight)
    idx = rng.choice(total, size=m, replace=False) if m else np.empty(0, dtype=np.int64)
    idx = np.sort(idx)
    iu, iv = _pairs_from_index(n, idx)
    return WeightedGraph(n, iu, iv, rng.random(m) * max_weight)


def poisson_torus(rate: float, d: int, seed=None) -> PointCloud:
    """Homogeneous Poisson process of the given rate on the flat unit torus."""
    if rate <= 0 or d < 1:
        raise ValueError("rate must be positive and d >= 1")
    rng = np.random.default_rng(seed)
    count = rng.poisson(rate)
    return PointCloud(rng.random((count, d)), metric="torus", side=1.0)


def poisson_box(side: float, d: int, seed=None) -> PointCloud:
    """Unit-rate Poisson process in the cube [-side/2, side/2]^d (Euclidean)."""
    rng = np.random.default_rng(seed)
    count = rng.poisson(side**d)
    return PointCloud(rng.uniform(-side / 2, side / 2, size=(count, d)))


def _blob_centers(rng, centers: int, d: int, min_separation: float) -> np.ndarray:
    for _ in range(1000):
        mu = rng.uniform(-10, 10, size=(centers, d))
        if centers < 2 or pdist(mu).min() >= min_separation:
            return mu
    raise ValueError(f"cannot place {centers} centres {min_separation} apart in [-10, 10]^{d}")


def sampler(
    kind: str, n: int, d: int = 2, seed=None, centers: int = 3, noise: float = 0.05, min_separation: float = 6.0
) -> PointCloud:
    """iid point clouds of a named family.

    ``uniform`` (unit box), ``normal``, ``exponential``, ``blobs``
    (unit-variance Gaussians around ``centers`` centres drawn in
    [-10, 10]^d, pairwise at least ``min_separation`` apart) and
    ``two-moons`` (d = 2, Gaussian jitter of scale ``noise``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    if kind in ("uniform", "uniform-box"):
        pts = rng.random((n, d))
    elif kind == "normal":
        pts = rng.standard_normal((n, d))
    elif kind == "exponential":
        pts = rng.exponential(size=(n, d))
    elif kind in ("blobs", "gaussian-blobs"):
        mu = _blob_centers(rng, centers, d, min_separation)
        which = rng.integers(0, centers, size=n)
        pts = mu[which] + rng.standard_normal((n, d))
    elif kind in ("two-moons", "moons"):
        if d != 2:
            raise ValueError("two-moons is defined in d = 2 only")
        n_out = n // 2
        t = rng.uniform(0, np.pi, size=n)
        pts = np.empty((n, 2))
        pts[:n_out] = np.column_stack([np.cos(t[:n_out]), np.sin(t[:n_out])])
        pts[n_out:] = np.column_stack([1 - np.cos(t[n_out:]), 0.5 - np.sin(t[n_out:])])
        pts += noise * rng.standard_normal((n, 2))
    else:
        raise ValueError(f"unknown sampler {kind!r}; choose from {', '.join(SAMPLERS)}")
    return PointCloud(pts)


# -- thresholds -----------------------------------------------------------------


def connectivity_threshold_formula(n: float, k: int) -> float:
    """Critical expected degree for k-cluster connectivity of G(n, p)."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    return (math.log(n) + (k - 1) * math.log(math.log(n))) / k


def nk_threshold_formula(n: float, d: int, k: int) -> float:
    """Critical expected degree for the disappearance of size-k components in G(n, r)."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.log(n) - (d - 1) * (k - 1) * math.log(math.log(n))


# -- component statistics ---------------------------------------------------------


def _sizes(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    adj = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    return np.bincount(connected_components(adj, directed=False)[1], minlength=1)


def count_components_of_size(g: WeightedGraph, k: int, threshold: float = np.inf) -> int:
    """Number of components with exactly ``k`` vertices in the graph of edges with weight <= threshold."""
    keep = g.w <= threshold
    if g.n_vertices == 0:
        return 0
    return int(np.count_nonzero(_sizes(g.n_vertices, g.u[keep], g.v[keep]) == k))


def k_cluster_connected(sizes: np.ndarray, k: int) -> bool:
    """Giant has >= k vertices and no other component has size in [k, n/2]."""
    n = int(sizes.sum())
    s = np.sort(sizes)[::-1]
    if s[0] < k:
        return False
    rest = s[1:]
    return not np.any((rest >= k) & (rest <= n / 2))


def run_connectivity_experiment(n: int, k: int, lambdas, trials: int, seed: int = 0) -> ExperimentResult:
    """Empirical P(G^(k)(n, p) connected) at p = Lambda / n for each Lambda."""
    lambdas = np.asarray(sorted(lambdas), dtype=float)
    pmax = min(1.0, float(lambdas.max()) / n)
    vals = np.zeros((trials, len(lambdas)))
    for t, rng in enumerate(trial_rngs(seed, trials)):
        g = gnp_weighted(n, rng, max_weight=pmax)
        for j, lam in enumerate(lambdas):
            keep = g.w <= lam / n
            vals[t, j] = k_cluster_connected(_sizes(n, g.u[keep], g.v[keep]), k)
    cfg = {"model": "gnp", "n": n, "k": k, "trials": trials, "seed": seed}
    extra = {"critical": connectivity_threshold_formula(n, k)}
    return ExperimentResult("gnp-connectivity", cfg, lambdas, vals, extra)


def run_nk_experiment(n: float, d: int, k: int, lambdas, trials: int, seed: int = 0) -> ExperimentResult:
    """Empirical P(N_k = 0) for the torus geometric graph at Lambda = n * omega_d * r^d."""
    lambdas = np.asarray(sorted(lambdas), dtype=float)
    radii = (lambdas / (n * ball_volume(d))) ** (1.0 / d)
    vals = np.zeros((trials, len(lambdas)))
    for t, rng in enumerate(trial_rngs(seed, trials)):
        pc = poisson_torus(n, d, rng)
        pairs = pc._tree().query_pairs(float(radii.max()), output_type="ndarray")
        if len(pairs):
            diff = np.abs(pc.points[pairs[:, 0]] - pc.points[pairs[:, 1]])
            dist = np.sqrt((np.minimum(diff, 1.0 - diff) ** 2).sum(axis=1))
        else:
            dist = np.empty(0)
        for j, r in enumerate(radii):
            keep = dist <= r
            sizes = _sizes(pc.n, pairs[keep, 0], pairs[keep, 1]) if pc.n else np.zeros(1, dtype=int)
            vals[t, j] = not np.any(sizes == k)
    cfg = {"model": "rgg", "n": n, "d": d, "k": k, "trials": trials, "seed": seed}
    extra = {"critical": nk_threshold_formula(n, d, k)}
    return ExperimentResult("rgg-nk", cfg, lambdas, vals, extra)


def max_pi(pc: PointCloud, k: int) -> float:
    """Largest death/birth among the finite points of the k-cluster diagram (nan if none)."""
    dgm = compute_k_cluster(mst_supergraph(pc), k).diagram
    ok = dgm.births > 0
    if not ok.any():
        return float("nan")
    return float(np.max(dgm.deaths[ok] / dgm.births[ok]))


def max_pi_experiment(d: int, k: int, n_grid, trials: int, seed: int = 0) -> ExperimentResult:
    """Max pi-value on the torus for each rate in ``n_grid``; fits the log-log slope."""
    if k < 2:
        raise ValueError("max-pi scaling needs k >= 2")
    n_grid = np.asarray(n_grid, dtype=float)
    vals = np.full((trials, len(n_grid)), np.nan)
    seeds = np.random.SeedSequence(seed).spawn(len(n_grid))
    for j, n in enumerate(n_grid):
        for t, rng in enumerate(trial_rngs(seeds[j], trials)):
            vals[t, j] = max_pi(poisson_torus(n, d, rng), k)
    logs = np.nanmean(np.log(vals), axis=0)
    slope, intercept = np.polyfit(np.log(n_grid), logs, 1)
    cfg = {"model": "maxpi", "d": d, "k": k, "trials": trials, "seed": seed}
    extra = {"exponent": float(slope), "intercept": float(intercept), "theory": 1.0 / (d * (k - 1))}
    return ExperimentResult("max-pi", cfg, n_grid, vals, extra)


def betti_grid(dgm, grid: np.ndarray) -> np.ndarray:
    """Matrix of persistent Betti numbers beta^{r,s} for r, s in ``grid`` (r > s entries zeroed)."""
    births = np.concatenate([dgm.births, dgm.essential_births])
    deaths = np.concatenate([dgm.deaths, np.full(dgm.n_essential, np.inf)])
    born = (births[:, None] <= grid[None, :]).astype(float)
    alive = (deaths[:, None] > grid[None, :]).astype(float)
    beta = born.T @ alive
    return np.triu(beta)


def _critical_grid(values) -> np.ndarray:
    vals = np.unique(np.concatenate([np.asarray(v, dtype=float) for v in values]))
    vals = vals[np.isfinite(vals)]
    mids = (vals[1:] + vals[:-1]) / 2
    lo = vals[:1] - 1.0 if len(vals) else np.zeros(1)
    hi = vals[-1:] + 1.0 if len(vals) else np.ones(1)
    return np.unique(np.concatenate([lo, vals, mids, hi]))


def add_one_delta(g: WeightedGraph, k: int, a: int, b: int, w0: float) -> int:
    """Max |beta^{r,s}| change over all critical (r, s) when edge (a, b) of weight w0 is added."""
    before = compute_k_cluster(g, k).diagram
    after = compute_k_cluster(g.with_edge(a, b, w0), k).diagram
    grid = _critical_grid(
        [before.births, before.deaths, before.essential_births,
         after.births, after.deaths, after.essential_births, [w0]]
    )
    return int(np.max(np.abs(betti_grid(after, grid) - betti_grid(before, grid))))


def add_one_cost_check(g: WeightedGraph, k: int, trials: int, seed: int = 0) -> ExperimentResult:
    """Insert random absent edges and record the largest persistent Betti change per insertion."""
    n = g.n_vertices
    present = set(g.edge_keys().tolist())
    absent = [a * n + b for a in range(n) for b in range(a + 1, n) if a * n + b not in present]
    if not absent:
        raise ValueError("graph is complete; no edge can be added")
    top = float(g.w.max()) if g.n_edges else 1.0
    rng = np.random.default_rng(seed)
    vals = np.zeros((trials, 1))
    for t in range(trials):
        key = absent[int(rng.integers(len(absent)))]
        w0 = float(rng.uniform(0, 1.1 * top))
        vals[t, 0] = add_one_delta(g, k, key // n, key % n, w0)
    cfg = {"model": "addone", "n": n, "k": k, "trials": trials, "seed": seed}
    return ExperimentResult("add-one", cfg, np.zeros(1), vals, {"max_abs_delta": int(vals.max())})


def limiting_diagram_check(
    sides, d: int = 2, k: int = 2, trials: int = 20, seed: int = 0,
    window=((0.0, 1.0), (0.0, 2.0)),
) -> ExperimentResult:
    """Diagram points with (birth, death) in ``window``, per unit volume, for growing boxes."""
    sides = np.asarray(sides, dtype=float)
    (b0, b1), (d0, d1) = window
    vals = np.zeros((trials, len(sides)))
    seeds = np.random.SeedSequence(seed).spawn(len(sides))
    for j, L in enumerate(sides):
        for t, rng in enumerate(trial_rngs(seeds[j], trials)):
            pc = poisson_box(L, d, rng)
            if pc.n < 2:
                continue
            dgm = compute_k_cluster(mst_supergraph(pc), k).diagram
            inside = (dgm.births >= b0) & (dgm.births <= b1) & (dgm.deaths >= d0) & (dgm.deaths <= d1)
            vals[t, j] = np.count_nonzero(inside) / L**d
    means = vals.mean(axis=0)
    rel = np.abs(np.diff(means)) / np.maximum(means[1:], 1e-300)
    cfg = {"model": "limitpd", "d": d, "k": k, "trials": trials, "seed": seed, "window": list(map(list, window))}
    return ExperimentResult("limit-pd", cfg, sides, vals, {"relative_change": rel.tolist()})


# -- universality -------------------------------------------------------------------


def cloud_diagram(pc: PointCloud, k: int):
    return compute_k_cluster(mst_supergraph(pc), k).diagram


def universality_samples(dists, d: int, k: int, n: int, trials: int, seed: int = 0) -> dict:
    """Pooled pi-values and per-diagram normalized ell-values for each distribution."""
    out = {}
    for i, name in enumerate(dists):
        pis, ells = [], []
        for rng in trial_rngs(seed + 7919 * i, trials):
            ps = pi_values(cloud_diagram(sampler(name, n, d, rng), k))
            pis.append(ps.values)
            if len(ps) >= 10:
                ells.append(ell_normalize(ps)[0])
        out[name] = {
            "pi": np.concatenate(pis) if pis else np.empty(0),
            "ell": np.concatenate(ells) if ells else np.empty(0),
        }
    return out


def universality_report(samples: dict) -> dict:
    names = list(samples)
    pairs = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            pairs[f"{a}|{b}"] = ks_two_sample(samples[a]["pi"], samples[b]["pi"])
    gumbel = {a: ks_distance(samples[a]["ell"]) for a in names if len(samples[a]["ell"])}
    return {"pairwise_ks_pi": pairs, "ks_ell_vs_lgumbel": gumbel}
