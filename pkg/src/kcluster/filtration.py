"""k-cluster, k-degree and standard 0-dimensional filtrations and their diagrams."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernel
from .graph import WeightedGraph, fmt, sorted_chunks

INF = np.inf


class FiltrationAssignment:
    """Filtration values on vertices and edges (edges aligned with the graph's arrays).

    When ``edge_values`` is omitted they follow the max rule
    ``max(f(u), f(v), W(e))`` on ``graph`` and are computed on first use.
    """

    def __init__(self, vertex_values, edge_values=None, kind="custom", k=None, graph=None):
        if edge_values is None and graph is None:
            raise ValueError("need edge values or a graph to derive them from")
        self.vertex_values = np.asarray(vertex_values, dtype=float)
        self._edge_values = None if edge_values is None else np.asarray(edge_values, dtype=float)
        self.kind = kind
        self.k = k
        self.graph = graph

    @property
    def edge_values(self) -> np.ndarray:
        if self._edge_values is None:
            self._edge_values = max_rule(self.graph, self.vertex_values)
        return self._edge_values

    def check_sublevel(self, g: WeightedGraph):
        lo = np.maximum(self.vertex_values[g.u], self.vertex_values[g.v])
        bad = np.flatnonzero(self.edge_values < lo)
        if len(bad):
            i = bad[0]
            raise ValueError(
                f"edge ({g.u[i]},{g.v[i]}) has value {self.edge_values[i]} below its endpoints' {lo[i]}"
            )


@dataclass(eq=False)
class PersistenceDiagram:
    """Finite points ``(birth, death, representative)`` plus essential classes."""

    births: np.ndarray
    deaths: np.ndarray
    reps: np.ndarray
    essential_births: np.ndarray
    essential_reps: np.ndarray
    k: int | None = None

    @property
    def n_finite(self) -> int:
        return len(self.births)

    @property
    def n_essential(self) -> int:
        return len(self.essential_births)

    def __len__(self):
        return self.n_finite + self.n_essential

    def finite_points(self) -> list[tuple[float, float, int]]:
        pts = zip(self.births.tolist(), self.deaths.tolist(), self.reps.tolist())
        return sorted(pts, key=lambda p: (p[0], p[1], p[2]))

    def essential_points(self) -> list[tuple[float, int]]:
        return sorted(zip(self.essential_births.tolist(), self.essential_reps.tolist()))

    def same_as(self, other: "PersistenceDiagram", representatives: bool = True) -> bool:
        if representatives:
            return (
                self.finite_points() == other.finite_points()
                and self.essential_points() == other.essential_points()
            )
        strip = lambda pts: sorted(p[:-1] for p in pts)  # noqa: E731
        return strip(self.finite_points()) == strip(other.finite_points()) and strip(
            self.essential_points()
        ) == strip(other.essential_points())

    def betti(self, r: float, s: float) -> int:
        """Persistent Betti number: classes born by ``r`` still alive after ``s``."""
        alive = np.count_nonzero((self.births <= r) & (self.deaths > s))
        return int(alive + np.count_nonzero(self.essential_births <= r))

    def scaled(self, c: float) -> "PersistenceDiagram":
        return PersistenceDiagram(
            self.births * c, self.deaths * c, self.reps, self.essential_births * c, self.essential_reps, self.k
        )


@dataclass(eq=False)
class MinimumSpanningForest:
    n_vertices: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def edge_set(self) -> frozenset[tuple[int, int]]:
        lo, hi = np.minimum(self.u, self.v), np.maximum(self.u, self.v)
        return frozenset(zip(lo.tolist(), hi.tolist()))

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())

    def as_graph(self) -> WeightedGraph:
        return WeightedGraph(self.n_vertices, self.u, self.v, self.w)


class KClusterResult(NamedTuple):
    diagram: PersistenceDiagram
    msf: MinimumSpanningForest
    filtration: FiltrationAssignment


def max_rule(g: WeightedGraph, vertex_values: np.ndarray) -> np.ndarray:
    """Edge values ``max(f(u), f(v), W(e))``."""
    return np.maximum(np.maximum(vertex_values[g.u], vertex_values[g.v]), g.w)


def compute_k_cluster(g: WeightedGraph, k: int, keep_diagonal: bool = False, backend=None) -> KClusterResult:
    """Compute the k-cluster filtration, its 0-dimensional diagram and the MSF in one sweep.

    Vertices whose final component has fewer than ``k`` vertices keep
    value ``inf`` and contribute no diagram point.  ``backend`` may be
    ``"python"`` or ``"cython"`` to pin a kernel; by default the compiled
    one is used when available.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sweep = kernel.get(backend)(g.n_vertices, int(k), bool(keep_diagonal))
    for chunk in sorted_chunks(g):
        if sweep.feed(g.u[chunk], g.v[chunk], g.w[chunk], chunk):
            break
    tau, births, deaths, reps, eb, er, msf_idx = sweep.result()
    dgm = PersistenceDiagram(births, deaths, reps, eb, er, k=k)
    msf = MinimumSpanningForest(g.n_vertices, g.u[msf_idx], g.v[msf_idx], g.w[msf_idx])
    filt = FiltrationAssignment(tau, kind="k-cluster", k=k, graph=g)
    return KClusterResult(dgm, msf, filt)


def compute_k_degree(g: WeightedGraph, k: int) -> FiltrationAssignment:
    """k-degree filtration: each vertex enters at its k-th smallest incident weight."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = g.n_vertices
    ends = np.concatenate([g.u, g.v])
    ws = np.concatenate([g.w, g.w])
    order = np.lexsort((ws, ends))
    ends, ws = ends[order], ws[order]
    deg = np.bincount(ends, minlength=n)
    start = np.concatenate([[0], np.cumsum(deg)[:-1]])
    delta = np.full(n, INF)
    ok = deg >= k
    delta[ok] = ws[start[ok] + k - 1]
    return FiltrationAssignment(delta, kind="k-degree", k=k, graph=g)


def standard_assignment(g: WeightedGraph) -> FiltrationAssignment:
    """All vertices at 0, edges at their weight (the k = 1 filtration)."""
    return FiltrationAssignment(np.zeros(g.n_vertices), g.w.copy(), kind="standard", k=1, graph=g)


def persistence_of_assignment(
    g: WeightedGraph, f: FiltrationAssignment, keep_diagonal: bool = False
) -> PersistenceDiagram:
    """Standard 0-dimensional persistence of an arbitrary sublevel filtration.

    Simplices enter in the order (value, vertices before edges, id); the
    younger component dies at each merge.  Simplices with infinite value
    never enter.
    """
    f.check_sublevel(g)
    n = g.n_vertices
    vals = np.asarray(f.vertex_values, dtype=float)
    evals = np.asarray(f.edge_values, dtype=float)
    lo, hi = np.minimum(g.u, g.v), np.maximum(g.u, g.v)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # elder key of each root: its earliest vertex under (value, id)
    key = [(vals[i], i) for i in range(n)]
    births, deaths, reps = [], [], []
    for i in np.lexsort((hi, lo, evals)):
        t = evals[i]
        if not np.isfinite(t):
            break
        a, b = find(int(g.u[i])), find(int(g.v[i]))
        if a == b:
            continue
        if key[b] < key[a]:
            a, b = b, a
        # b is younger
        yb, yrep = key[b]
        if keep_diagonal or yb < t:
            births.append(yb)
            deaths.append(t)
            reps.append(yrep)
        parent[b] = a

    ess = sorted(key[r] for r in range(n) if find(r) == r and np.isfinite(vals[r]))
    return PersistenceDiagram(
        np.array(births, dtype=float),
        np.array(deaths, dtype=float),
        np.array(reps, dtype=np.int64),
        np.array([e[0] for e in ess], dtype=float),
        np.array([e[1] for e in ess], dtype=np.int64),
        k=f.k,
    )


def k_degree_diagram(g: WeightedGraph, k: int) -> tuple[PersistenceDiagram, FiltrationAssignment]:
    f = compute_k_degree(g, k)
    return persistence_of_assignment(g, f), f


def write_diagram(path, dgm: PersistenceDiagram, header: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write("birth,death,representative\n")
        for b, d, r in dgm.finite_points():
            fh.write(f"{fmt(b)},{fmt(d)},{r}\n")
        for b, r in dgm.essential_points():
            fh.write(f"{fmt(b)},inf,{r}\n")


def read_diagram(path) -> PersistenceDiagram:
    fin, ess = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("birth"):
                continue
            b, d, r = line.split(",")
            if d == "inf":
                ess.append((float(b), int(r)))
            else:
                fin.append((float(b), float(d), int(r)))
    return PersistenceDiagram(
        np.array([p[0] for p in fin], dtype=float),
        np.array([p[1] for p in fin], dtype=float),
        np.array([p[2] for p in fin], dtype=np.int64),
        np.array([p[0] for p in ess], dtype=float),
        np.array([p[1] for p in ess], dtype=np.int64),
    )


def write_filtration(path, f: FiltrationAssignment):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("vertex,tau\n")
        for i, t in enumerate(f.vertex_values.tolist()):
            fh.write(f"{i},{fmt(t)}\n")


def write_msf(path, msf: MinimumSpanningForest):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("u,v,w\n")
        for a, b, w in zip(msf.u.tolist(), msf.v.tolist(), msf.w.tolist()):
            fh.write(f"{a},{b},{fmt(w)}\n")
