"""Approximate minimum cut and k-cut via random contraction, on a simulated AMPC runtime."""

from ampcut.decomp import LevelLabeling, low_depth_decomp, validate_decomposition
from ampcut.graph import Graph, OrderedGraph, SpanningTree, assign_contraction_order, generate, parse_graph
from ampcut.kcut import KCutResult, apx_split
from ampcut.mincut import CutResult, ampc_min_cut, exact_min_cut, make_schedule
from ampcut.runtime import AmpcConfig, AmpcRuntime, AmpcStats, make_runtime
from ampcut.singleton import SingletonWitness, smallest_singleton_cut

__all__ = [
    "AmpcConfig",
    "AmpcRuntime",
    "AmpcStats",
    "CutResult",
    "Graph",
    "KCutResult",
    "LevelLabeling",
    "OrderedGraph",
    "SingletonWitness",
    "SpanningTree",
    "ampc_min_cut",
    "apx_split",
    "assign_contraction_order",
    "exact_min_cut",
    "generate",
    "low_depth_decomp",
    "make_runtime",
    "make_schedule",
    "parse_graph",
    "smallest_singleton_cut",
    "validate_decomposition",
]
