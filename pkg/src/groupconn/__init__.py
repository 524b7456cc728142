"""Exhaustive verification of group connectivity for multigraphs."""

from groupconn.group import AbelianGroup, parse_group_spec
from groupconn.graph import Multigraph, parse_graph
from groupconn.flow import (
    BoundarySet,
    achievable_boundaries,
    boundary_of,
    flow_with_boundary,
    has_k_nzf,
    has_nowhere_zero_flow,
)
from groupconn.connectivity import ConnectivityVerdict, failed_boundaries, is_group_connected

__all__ = [
    "AbelianGroup",
    "BoundarySet",
    "ConnectivityVerdict",
    "Multigraph",
    "achievable_boundaries",
    "boundary_of",
    "failed_boundaries",
    "flow_with_boundary",
    "has_k_nzf",
    "has_nowhere_zero_flow",
    "is_group_connected",
    "parse_graph",
    "parse_group_spec",
]
