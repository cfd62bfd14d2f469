"""k-cluster persistence: one-pass filtration, diagrams, clustering, and significance tests."""

from .clustering import NOISE, ClusterLabeling, choose_threshold, extract_clusters
from .filtration import (
    FiltrationAssignment,
    KClusterResult,
    MinimumSpanningForest,
    PersistenceDiagram,
    compute_k_cluster,
    compute_k_degree,
    k_degree_diagram,
    persistence_of_assignment,
    standard_assignment,
)
from .graph import AugmentedUnionFind, InputError, PointCloud, WeightedGraph, point_cloud_to_graph, sort_edges
from .kernel import BACKEND
from .stats import SignificanceReport, ell_normalize, p_value, pi_values, significant_clusters

__all__ = [
    "BACKEND",
    "NOISE",
    "AugmentedUnionFind",
    "ClusterLabeling",
    "FiltrationAssignment",
    "InputError",
    "KClusterResult",
    "MinimumSpanningForest",
    "PersistenceDiagram",
    "PointCloud",
    "SignificanceReport",
    "WeightedGraph",
    "choose_threshold",
    "compute_k_cluster",
    "compute_k_degree",
    "ell_normalize",
    "extract_clusters",
    "k_degree_diagram",
    "p_value",
    "persistence_of_assignment",
    "pi_values",
    "point_cloud_to_graph",
    "significant_clusters",
    "sort_edges",
    "standard_assignment",
]
