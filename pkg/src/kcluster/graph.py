"""Weighted graphs, point clouds, and the augmented union-find."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import Delaunay, QhullError, cKDTree
from scipy.spatial.distance import pdist


class InputError(ValueError):
    """Malformed graph or point-cloud data, optionally tied to a file line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(eq=False)
class WeightedGraph:
    """Undirected weighted simple graph stored as parallel edge arrays.

    ``u[i], v[i], w[i]`` is the i-th edge. Construction validates that
    endpoints are in range, there are no self-loops or duplicate
    undirected edges, and all weights are finite and non-negative.
    """

    n_vertices: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.n_vertices = int(self.n_vertices)
        self.u = np.ascontiguousarray(self.u, dtype=np.int64).reshape(-1)
        self.v = np.ascontiguousarray(self.v, dtype=np.int64).reshape(-1)
        self.w = np.ascontiguousarray(self.w, dtype=np.float64).reshape(-1)
        self._validate()

    def _validate(self):
        n = self.n_vertices
        if n < 0:
            raise InputError("n_vertices must be non-negative")
        if not (len(self.u) == len(self.v) == len(self.w)):
            raise InputError("edge arrays differ in length")
        if len(self.u) == 0:
            return
        if self.u.min() < 0 or self.v.min() < 0 or max(self.u.max(), self.v.max()) >= n:
            raise InputError("edge endpoint out of range")
        if np.any(self.u == self.v):
            raise InputError("self-loop in edge list")
        if not np.all(np.isfinite(self.w)) or np.any(self.w < 0):
            raise InputError("edge weights must be finite and non-negative")
        keys = self.edge_keys()
        if len(np.unique(keys)) != len(keys):
            raise InputError("duplicate undirected edge")

    @classmethod
    def from_edges(cls, n_vertices: int, edges) -> "WeightedGraph":
        edges = list(edges)
        if not edges:
            return cls(n_vertices, np.empty(0), np.empty(0), np.empty(0))
        u, v, w = zip(*edges)
        return cls(n_vertices, np.array(u), np.array(v), np.array(w, dtype=float))

    @property
    def n_edges(self) -> int:
        return len(self.w)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def edge_keys(self) -> np.ndarray:
        """Integer key ``min(u,v) * n + max(u,v)`` identifying each undirected edge."""
        lo = np.minimum(self.u, self.v)
        hi = np.maximum(self.u, self.v)
        return lo * max(self.n_vertices, 1) + hi

    def scaled(self, c: float) -> "WeightedGraph":
        return WeightedGraph(self.n_vertices, self.u, self.v, self.w * c)

    def with_edge(self, a: int, b: int, weight: float) -> "WeightedGraph":
        return WeightedGraph(
            self.n_vertices,
            np.append(self.u, a),
            np.append(self.v, b),
            np.append(self.w, weight),
        )

    def threshold(self, t: float) -> "WeightedGraph":
        keep = self.w <= t
        return WeightedGraph(self.n_vertices, self.u[keep], self.v[keep], self.w[keep])

    def component_labels(self) -> np.ndarray:
        """Connected-component label per vertex."""
        n = self.n_vertices
        adj = coo_matrix((np.ones(self.n_edges), (self.u, self.v)), shape=(n, n))
        return connected_components(adj, directed=False)[1]


@dataclass(eq=False)
class PointCloud:
    """Points in R^d, with either the Euclidean or the flat-torus metric."""

    points: np.ndarray
    metric: str = "euclidean"
    side: float = 1.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise InputError("points must form an (n, d) array with d >= 1")
        if not np.all(np.isfinite(pts)):
            raise InputError("point coordinates must be finite")
        if self.metric not in ("euclidean", "torus"):
            raise InputError(f"unknown metric {self.metric!r}")
        if self.metric == "torus":
            if self.side <= 0:
                raise InputError("torus side length must be positive")
            if np.any(pts < 0) or np.any(pts >= self.side):
                raise InputError("torus coordinates must lie in [0, side)")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def _tree(self) -> cKDTree:
        if self.metric == "torus":
            return cKDTree(self.points, boxsize=self.side)
        return cKDTree(self.points)

    def pairwise(self) -> np.ndarray:
        """Condensed distance vector in ``pdist`` order (i < j, row-major)."""
        if self.metric == "euclidean":
            return pdist(self.points)
        total = np.zeros(self.n * (self.n - 1) // 2)
        for j in range(self.d):
            diff = pdist(self.points[:, j : j + 1], "cityblock")
            diff = np.minimum(diff, self.side - diff)
            total += diff * diff
        return np.sqrt(total)


def _triu_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def _keys(g: WeightedGraph, idx: np.ndarray) -> np.ndarray:
    u, v = g.u[idx], g.v[idx]
    return np.minimum(u, v) * max(g.n_vertices, 1) + np.maximum(u, v)


def _edge_order(w: np.ndarray, keys) -> np.ndarray:
    order = np.argsort(w)
    ws = w[order]
    if not np.any(ws[1:] == ws[:-1]):
        return order
    keys = keys()
    if np.all(keys[1:] > keys[:-1]):
        # already in endpoint order: a stable weight sort finishes the job
        return np.argsort(w, kind="stable")
    return np.lexsort((keys, w))


def sort_edges(g: WeightedGraph) -> np.ndarray:
    """Permutation putting edges in (weight, min endpoint, max endpoint) order.

    The order is total even under tied weights, which makes every
    downstream computation deterministic.
    """
    return _edge_order(g.w, g.edge_keys)


def sorted_chunks(g: WeightedGraph, first: int | None = None):
    """Yield edge-index chunks whose concatenation is ``sort_edges(g)``.

    Each chunk holds the lightest remaining edges (ties never straddle
    two chunks) and chunk sizes grow geometrically, so a consumer that
    stops early pays for partitioning instead of a full sort.
    """
    w = g.w
    c = first or max(8 * g.n_vertices, 1024)
    if g.n_edges <= 2 * c:
        yield _edge_order(w, g.edge_keys)
        return
    t = np.partition(w, c - 1)[c - 1]
    head = np.flatnonzero(w <= t)
    yield head[_edge_order(w[head], lambda: _keys(g, head))]
    rest = np.flatnonzero(w > t)
    while len(rest):
        c *= 4
        ws = w[rest]
        if len(rest) <= 2 * c:
            chunk, rest = rest, rest[:0]
        else:
            t = np.partition(ws, c - 1)[c - 1]
            mask = ws <= t
            chunk, rest = rest[mask], rest[~mask]
        yield chunk[_edge_order(w[chunk], lambda: _keys(g, chunk))]


def sorted_edges(g: WeightedGraph) -> list[tuple[int, int, float]]:
    order = sort_edges(g)
    return list(zip(g.u[order].tolist(), g.v[order].tolist(), g.w[order].tolist()))


def parse_mode(mode: str) -> tuple[str, int | None]:
    """Parse ``complete`` or ``knn=M`` into ``(kind, m)``."""
    if mode == "complete":
        return "complete", None
    if mode.startswith("knn"):
        _, _, m = mode.partition("=")
        try:
            m = int(m)
        except ValueError:
            raise InputError(f"bad knn mode {mode!r}; expected knn=M") from None
        if m < 1:
            raise InputError(f"knn mode needs M >= 1, got {m}")
        return "knn", m
    raise InputError(f"unknown mode {mode!r}")


def point_cloud_to_graph(pc: PointCloud, mode: str = "complete", m: int | None = None) -> WeightedGraph:
    """Build the distance graph of a point cloud.

    ``mode="complete"`` emits all n(n-1)/2 pairs. ``mode="knn"`` (or
    ``"knn=M"``) emits the symmetrized m-nearest-neighbour graph, which
    only reproduces the complete-graph diagram when it contains the
    minimum spanning tree.
    """
    if pc.n < 1:
        raise InputError("point cloud is empty")
    if mode != "complete" and mode != "knn":
        mode, m = parse_mode(mode)
    n = pc.n
    if mode == "complete":
        iu, iv = _triu_pairs(n)
        return WeightedGraph(n, iu, iv, pc.pairwise())
    if m is None or m < 1:
        raise InputError("knn mode needs m >= 1")
    if m >= n:
        raise InputError(f"knn with m={m} needs more than m points (got {n})")
    dist, idx = pc._tree().query(pc.points, k=m + 1)
    rows = np.repeat(np.arange(n), m)
    cols = idx[:, 1:].reshape(-1)
    ds = dist[:, 1:].reshape(-1)
    lo, hi = np.minimum(rows, cols), np.maximum(rows, cols)
    keys, first = np.unique(lo * n + hi, return_index=True)
    return WeightedGraph(n, lo[first], hi[first], ds[first])


def radius_graph(pc: PointCloud, r: float) -> WeightedGraph:
    """All pairs at distance <= r."""
    pairs = pc._tree().query_pairs(r, output_type="ndarray")
    if len(pairs) == 0:
        return WeightedGraph(pc.n, np.empty(0), np.empty(0), np.empty(0))
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    diff = pc.points[pairs[:, 0]] - pc.points[pairs[:, 1]]
    if pc.metric == "torus":
        diff = np.abs(diff)
        diff = np.minimum(diff, pc.side - diff)
    return WeightedGraph(pc.n, pairs[:, 0], pairs[:, 1], np.sqrt((diff * diff).sum(axis=1)))


def spanning_radius_graph(pc: PointCloud, r0: float | None = None) -> WeightedGraph:
    """Smallest radius graph (by doubling) that is connected.

    A connected radius graph contains every edge of the complete graph's
    minimum spanning tree, so all 0-dimensional filtrations computed on
    it match the complete graph while using far fewer edges.
    """
    n = pc.n
    if n <= 1:
        return WeightedGraph(n, np.empty(0), np.empty(0), np.empty(0))
    if r0 is None:
        vol = pc.side**pc.d if pc.metric == "torus" else float(np.prod(np.ptp(pc.points, axis=0) + 1e-12))
        r0 = (vol * 2.0 * np.log(n + 1) / n) ** (1.0 / pc.d)
    r = r0
    while True:
        g = radius_graph(pc, r)
        if g.n_edges >= n - 1 and len(np.unique(g.component_labels())) == 1:
            return g
        r *= 1.5


def _pair_graph(pc: PointCloud, a: np.ndarray, b: np.ndarray) -> WeightedGraph:
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    keys = np.unique(lo * pc.n + hi)
    lo, hi = keys // pc.n, keys % pc.n
    dist = np.sqrt(((pc.points[lo] - pc.points[hi]) ** 2).sum(axis=1))
    return WeightedGraph(pc.n, lo, hi, dist)


def mst_supergraph(pc: PointCloud) -> WeightedGraph:
    """Sparse graph guaranteed to contain a minimum spanning tree of the complete distance graph.

    Euclidean clouds use sorted neighbours (d = 1) or Delaunay edges
    (d = 2, 3); the torus uses a connected radius graph.  Anything else,
    or a degenerate triangulation, falls back to the complete graph.
    Diagram values are identical to the complete graph's.
    """
    n = pc.n
    if n <= 2 or pc.metric == "torus":
        return spanning_radius_graph(pc) if n > 2 else point_cloud_to_graph(pc)
    if pc.d == 1:
        order = np.argsort(pc.points[:, 0], kind="stable")
        return _pair_graph(pc, order[:-1], order[1:])
    if pc.d <= 3:
        try:
            simplices = Delaunay(pc.points).simplices
        except QhullError:
            return point_cloud_to_graph(pc)
        cols = simplices.shape[1]
        a = np.concatenate([simplices[:, i] for i in range(cols) for j in range(i + 1, cols)])
        b = np.concatenate([simplices[:, j] for i in range(cols) for j in range(i + 1, cols)])
        g = _pair_graph(pc, a, b)
        # points Qhull dropped as coplanar would be left isolated
        if len(np.unique(g.component_labels())) == 1:
            return g
    return point_cloud_to_graph(pc)


class AugmentedUnionFind:
    """Union by size without path compression, plus member enumeration.

    Trees keep their shape so every component can be walked from its
    root through the per-vertex child lists.  Each root also carries a
    birth value (the minimum filtration value of its members) and a
    canonical representative.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.children: list[list[int]] = [[] for _ in range(n)]
        self.birth = [float("inf")] * n
        self.rep = list(range(n))

    def __len__(self):
        return len(self.parent)

    def root(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            v = parent[v]
        return v

    def component_size(self, v: int) -> int:
        return self.size[self.root(v)]

    def component(self, v: int) -> list[int]:
        """Members of v's component, by depth-first walk from the root."""
        stack = [self.root(v)]
        out = []
        children = self.children
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(children[x])
        return out

    def merge(self, u: int, v: int) -> int:
        """Union the sets of u and v and return the new root.

        The larger tree absorbs the smaller; on equal sizes the root with
        the smaller id wins.
        """
        ru, rv = self.root(u), self.root(v)
        if ru == rv:
            return ru
        if self.size[ru] < self.size[rv] or (self.size[ru] == self.size[rv] and rv < ru):
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        self.children[ru].append(rv)
        return ru

    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p == v]


def fmt(x: float) -> str:
    """Shortest round-trip decimal, integral values without ``.0``; ``inf`` for infinity."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _iter_data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def read_edge_list(path, n_vertices: int | None = None) -> WeightedGraph:
    """Read ``u,v,w`` lines. Vertex count defaults to 1 + the largest id seen."""
    us, vs, ws = [], [], []
    seen = {}
    for lineno, line in _iter_data_lines(path):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise InputError(f"expected 'u,v,w', got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise InputError(f"cannot parse {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise InputError("negative vertex id", lineno)
        if a == b:
            raise InputError(f"self-loop on vertex {a}", lineno)
        if not np.isfinite(w) or w < 0:
            raise InputError(f"weight must be finite and non-negative, got {parts[2]}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise InputError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        us.append(a)
        vs.append(b)
        ws.append(w)
    n = n_vertices
    if n is None:
        n = max(max(us, default=-1), max(vs, default=-1)) + 1
    return WeightedGraph(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64), np.array(ws))


def read_point_cloud(path, metric: str = "euclidean", side: float = 1.0) -> PointCloud:
    rows = []
    dim = None
    for lineno, line in _iter_data_lines(path):
        try:
            row = [float(x) for x in line.split(",")]
        except ValueError:
            raise InputError(f"cannot parse coordinates {line!r}", lineno) from None
        if dim is None:
            dim = len(row)
        elif len(row) != dim:
            raise InputError(f"expected {dim} coordinates, got {len(row)}", lineno)
        rows.append(row)
    if not rows:
        raise InputError(f"no points in {Path(path).name}")
    return PointCloud(np.array(rows), metric=metric, side=side)


def write_edge_list(path, g: WeightedGraph):
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, w in g.edges:
            fh.write(f"{a},{b},{fmt(w)}\n")


def write_point_cloud(path, pc: PointCloud, header: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        for row in pc.points.tolist():
            fh.write(",".join(fmt(x) for x in row) + "\n")
