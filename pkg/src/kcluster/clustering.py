"""Persistence-based cluster extraction on a minimum spanning forest.

Merges are replayed in filtration order.  A merge between two
components that both already hold at least ``k`` vertices is only
performed when the younger side's death/birth ratio stays below the
threshold ``alpha``; every other merge always happens.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filtration import FiltrationAssignment, MinimumSpanningForest, PersistenceDiagram, max_rule
from .graph import WeightedGraph

NOISE = -1


@dataclass(eq=False)
class ClusterLabeling:
    """Per-vertex cluster id (the cluster's canonical representative) or ``NOISE``."""

    labels: np.ndarray
    alpha: float

    @property
    def num_clusters(self) -> int:
        return len(self.clusters())

    def clusters(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, lab in enumerate(self.labels.tolist()):
            if lab != NOISE:
                out.setdefault(lab, []).append(v)
        return out

    def partition(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.clusters().values()}


def _ratio(death: float, birth: float) -> float:
    if birth > 0:
        return death / birth
    return np.inf if death > 0 else 1.0


def extract_clusters(
    forest: MinimumSpanningForest | WeightedGraph, f: FiltrationAssignment, alpha: float, k: int | None = None
) -> ClusterLabeling:
    """Keep every cluster whose death/birth persistence reaches ``alpha``.

    ``forest`` may be the spanning forest returned by
    :func:`~kcluster.filtration.compute_k_cluster` or the full graph; the
    result is the same.  ``f`` must be the k-cluster assignment on the
    same vertex set.
    """
    if not alpha >= 1:
        raise ValueError(f"alpha must be >= 1 (death/birth is never below 1), got {alpha}")
    k = f.k if k is None else k
    if k is None:
        raise ValueError("cluster size k is unknown; pass k explicitly")
    g = forest.as_graph() if isinstance(forest, MinimumSpanningForest) else forest
    n = g.n_vertices
    tau = f.vertex_values
    ev = max_rule(g, tau)
    lo, hi = np.minimum(g.u, g.v), np.maximum(g.u, g.v)

    parent = list(range(n))
    size = [1] * n
    # elder key (birth, representative) carried at each root
    key = [(tau[v], v) for v in range(n)]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in np.lexsort((hi, lo, g.w, ev)):
        if not np.isfinite(ev[i]):
            break
        a, b = find(int(g.u[i])), find(int(g.v[i]))
        if a == b:
            continue
        if key[b] < key[a]:
            a, b = b, a
        if size[a] >= k and size[b] >= k and not _ratio(ev[i], key[b][0]) < alpha:
            continue
        if size[a] < size[b]:
            parent[a] = b
            size[b] += size[a]
            key[b] = key[a]
        else:
            parent[b] = a
            size[a] += size[b]

    labels = np.full(n, NOISE, dtype=np.int64)
    for v in range(n):
        r = find(v)
        if np.isfinite(tau[v]) and size[r] >= k:
            labels[v] = key[r][1]
    return ClusterLabeling(labels, float(alpha))


def persistence_values(dgm: PersistenceDiagram) -> np.ndarray:
    """Death/birth of every diagram point, essentials as ``inf``, sorted descending."""
    fin = np.array([_ratio(d, b) for b, d in zip(dgm.births.tolist(), dgm.deaths.tolist())], dtype=float)
    allv = np.concatenate([fin, np.full(dgm.n_essential, np.inf)])
    return np.sort(allv)[::-1]


def choose_threshold(dgm: PersistenceDiagram, num_clusters: int) -> float:
    """Threshold leaving exactly ``num_clusters`` points at or above it.

    The value sits at the log-scale midpoint between the ``num_clusters``-th
    and the next largest persistence (essential classes count as infinite).
    """
    vals = persistence_values(dgm)
    total = len(vals)
    if not 1 <= num_clusters <= total:
        raise ValueError(f"num_clusters must be in [1, {total}], got {num_clusters}")
    if num_clusters == total:
        return 1.0
    hi, lo = vals[num_clusters - 1], vals[num_clusters]
    if not hi > lo:
        raise ValueError(f"persistence tie at rank {num_clusters}; cannot separate {num_clusters} clusters")
    if np.isinf(hi):
        return 2.0 * lo
    return float(np.sqrt(hi * lo))


def write_labels(path, lab: ClusterLabeling, header: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write("vertex,label\n")
        for v, c in enumerate(lab.labels.tolist()):
            fh.write(f"{v},{'NOISE' if c == NOISE else c}\n")
