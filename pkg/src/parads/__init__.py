"""Parallel adaptive sampling with epoch-numbered state frames."""

from .engine import EngineConfig, run
from .graph import Graph, connected_components, diameter_upper_bound, parse_edge_list, read_edge_list
from .kadabra import BcResult, estimate_bc

__version__ = "0.1.0"

__all__ = [
    "BcResult",
    "EngineConfig",
    "Graph",
    "connected_components",
    "diameter_upper_bound",
    "estimate_bc",
    "parse_edge_list",
    "read_edge_list",
    "run",
]
