"""Direct computations the message-passing algorithms are compared against."""

from __future__ import annotations

import itertools
from collections import Counter

from .graph import GraphRdd


def union_find_components(g: GraphRdd) -> dict:
    """Smallest vertex id in each weakly connected component."""
    parent = {v: v for v in g.vertex_ids()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges():
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return {v: find(v) for v in parent}


def brute_force_triangles(g: GraphRdd) -> dict:
    """Triangles per vertex by testing every vertex triple; only vertices with an edge appear."""
    adj = {(e.src, e.dst) for e in g.edges()} | {(e.dst, e.src) for e in g.edges()}
    touched = {e.src for e in g.edges()} | {e.dst for e in g.edges()}
    counts = {v: 0 for v in touched}
    for a, b, c in itertools.combinations(sorted(g.vertex_ids()), 3):
        if (a, b) in adj and (b, c) in adj and (a, c) in adj:
            for v in (a, b, c):
                counts[v] += 1
    return counts


def direct_in_degrees(g: GraphRdd) -> dict:
    return dict(Counter(e.dst for e in g.edges()))
