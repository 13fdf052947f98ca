"""Degree-bounded preferential attachment and key predistribution experiments."""

from .graph import Graph, new_graph, add_edge, average_path_length, diameter, components, remove_nodes, isolated_count
from .generators import GenParams, generate_pa, generate_padb, degree_histogram, theoretical_alpha
from .schemes import SchemeConfig, KeyAssignment, assign_padb_keys, generate_eg, generate_cps, generate_ls, shared_keys
from .adversary import compromise, resilience_curve

__version__ = "0.1.0"

__all__ = [
    "Graph", "new_graph", "add_edge", "average_path_length", "diameter", "components",
    "remove_nodes", "isolated_count", "GenParams", "generate_pa", "generate_padb",
    "degree_histogram", "theoretical_alpha", "SchemeConfig", "KeyAssignment",
    "assign_padb_keys", "generate_eg", "generate_cps", "generate_ls", "shared_keys",
    "compromise", "resilience_curve",
]
