"""Brute-force references for the k-cluster filtration.

Nothing here touches the fast kernel or the augmented union-find: vertex
values come from recomputing connected components of every weight
sublevel graph from scratch, and the spanning forest from a
reachability test per edge.
"""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .filtration import FiltrationAssignment, MinimumSpanningForest, persistence_of_assignment
from .graph import WeightedGraph


def _component_sizes(n, u, v):
    adj = coo_matrix((np.ones(len(u)), (u, v)), shape=(n, n))
    _, labels = connected_components(adj, directed=False)
    return np.bincount(labels)[labels]


def _edge_values(g, tau):
    return np.array([max(tau[a], tau[b], w) for a, b, w in g.edges], dtype=float)


def naive_tau(g: WeightedGraph, k: int) -> FiltrationAssignment:
    """tau_k(v) = first edge weight t at which v's component in the t-sublevel graph has >= k vertices."""
    n = g.n_vertices
    tau = np.full(n, np.inf)
    if k <= 1:
        tau[:] = 0.0
        return FiltrationAssignment(tau, _edge_values(g, tau), kind="k-cluster", k=k, graph=g)
    for t in np.unique(g.w):
        keep = g.w <= t
        sizes = _component_sizes(n, g.u[keep], g.v[keep])
        fresh = np.isinf(tau) & (sizes >= k)
        tau[fresh] = t
        if not np.isinf(tau).any():
            break
    return FiltrationAssignment(tau, _edge_values(g, tau), kind="k-cluster", k=k, graph=g)


def naive_diagram(g: WeightedGraph, k: int, keep_diagonal: bool = False):
    return persistence_of_assignment(g, naive_tau(g, k), keep_diagonal=keep_diagonal)


def naive_msf(g: WeightedGraph) -> MinimumSpanningForest:
    """Greedy spanning forest: keep an edge iff its ends are not yet joined by kept edges."""
    n = g.n_vertices
    lo, hi = np.minimum(g.u, g.v), np.maximum(g.u, g.v)
    adj = [[] for _ in range(n)]
    kept = []
    for i in np.lexsort((hi, lo, g.w)):
        a, b = int(g.u[i]), int(g.v[i])
        seen = {a}
        frontier = [a]
        while frontier and b not in seen:
            x = frontier.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        if b in seen:
            continue
        adj[a].append(b)
        adj[b].append(a)
        kept.append(i)
    kept = np.array(kept, dtype=np.int64)
    return MinimumSpanningForest(n, g.u[kept], g.v[kept], g.w[kept])
