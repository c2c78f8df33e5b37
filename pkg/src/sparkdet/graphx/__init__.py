"""Graph Rdds, message passing, pregel and the algorithms built on them."""

from .algorithms import (
    CflState,
    cfl_coloring,
    cfl_update_distribution,
    coloring_of,
    connected_components,
    in_degrees,
    is_proper,
    sample_color,
    triangle_count,
)
from .graph import (
    Edge,
    GraphRdd,
    PregelResult,
    aggregate_messages,
    aggregate_messages_with_active_set,
    build_graph,
    join_graph,
    map_vertices,
    message_map,
    pregel,
    representations,
    same_graph,
)
from .oracles import brute_force_triangles, direct_in_degrees, union_find_components

__all__ = [
    "CflState",
    "Edge",
    "GraphRdd",
    "PregelResult",
    "aggregate_messages",
    "aggregate_messages_with_active_set",
    "brute_force_triangles",
    "build_graph",
    "cfl_coloring",
    "cfl_update_distribution",
    "coloring_of",
    "connected_components",
    "direct_in_degrees",
    "in_degrees",
    "is_proper",
    "join_graph",
    "map_vertices",
    "message_map",
    "pregel",
    "representations",
    "same_graph",
    "sample_color",
    "triangle_count",
    "union_find_components",
]
