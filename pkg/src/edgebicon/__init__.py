"""Simulated distributed edge-biconnectivity: a synchronous CONGEST engine, the
five-phase BFS/preorder/LCA protocol, a local flooding variant, and sequential
oracles to check them against."""

from .estimator import EdgeBiconnectivity, LocalBridgeFinder
from .graph import Graph, attach_gadget, diameter, generate, is_connected, parse_edge_list, to_dot
from .local import classification_correct_round, doubling_run, run_local
from .oracles import (EdgeClassification, bridges_oracle, classify, components_oracle,
                      cycle_witness_radius)
from .protocol import extract_result, run_biconnectivity
from .sim import Message, Metrics, SimConfig, build, message_bit_size, run_to_quiescence

__all__ = [
    "EdgeBiconnectivity", "LocalBridgeFinder", "Graph", "attach_gadget", "diameter",
    "generate", "is_connected", "parse_edge_list", "to_dot", "classification_correct_round",
    "doubling_run", "run_local", "EdgeClassification", "bridges_oracle", "classify",
    "components_oracle", "cycle_witness_radius", "extract_result", "run_biconnectivity",
    "Message", "Metrics", "SimConfig", "build", "message_bit_size", "run_to_quiescence",
]
__version__ = "0.1.0"
