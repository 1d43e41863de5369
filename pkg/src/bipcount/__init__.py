"""Polymer-model approximate counting on random regular bipartite graphs.

Independent sets (hardcore model) and proper q-colorings, with exact
oracles, structural property checkers and a Kotecky-Preiss verifier.
"""

from .coloring import ColorClass, algorithm2, coloring_weight, colorings_cluster_via_polymers
from .driver import AlgorithmConfig
from .errors import (BipcountError, DomainError, MalformedInputError, ModelError, PreconditionError,
                     RegimeError, ResourceBudgetError)
from .expansion import Estimate, Series, estimate_log_xi, log_series, truncation_order, xi_coefficients
from .generate import SampleConfig, sample_graph
from .graph import BipartiteGraph, L, R, Vertex, build_graph, complete_bipartite_22, left, parse_graph, right
from .hardcore import HardcoreParams, algorithm1, hardcore_weight, z_cluster_via_polymers
from .oracle import count_colorings, count_colorings_cluster, count_is, count_is_cluster
from .polymer import Polymer, PolymerModel, compatible, kp_check, xi_exact
from .report import RunReport, run_experiment

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig", "BipartiteGraph", "BipcountError", "ColorClass", "DomainError", "Estimate",
    "HardcoreParams", "L", "MalformedInputError", "ModelError", "Polymer", "PolymerModel",
    "PreconditionError", "R", "RegimeError", "ResourceBudgetError", "RunReport", "SampleConfig",
    "Series", "Vertex", "algorithm1", "algorithm2", "build_graph", "coloring_weight",
    "colorings_cluster_via_polymers", "compatible", "complete_bipartite_22", "count_colorings", "count_colorings_cluster",
    "count_is", "count_is_cluster", "estimate_log_xi", "hardcore_weight", "kp_check", "left",
    "log_series", "parse_graph", "right", "run_experiment", "sample_graph", "truncation_order",
    "xi_coefficients", "xi_exact", "z_cluster_via_polymers",
]
