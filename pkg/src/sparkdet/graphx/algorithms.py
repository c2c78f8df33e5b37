"""Reference graph algorithms written against the message-passing combinators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..chaos import ChaosSource, derive_seed
from ..core import Rdd
from ..errors import EncodingViolation
from ..opdsl import resolve
from ..values import INT64_MAX
from .graph import (
    DEFAULT_MAX_ITERS,
    GraphRdd,
    PregelResult,
    aggregate_messages,
    map_vertices,
    message_map,
    pregel,
)

SUM = resolve("sum_i64_wrapping")
MIN = resolve("min_i64")
UNION = resolve("union_set")
OR = resolve("or_bool")


def in_degrees(g: GraphRdd, chaos: ChaosSource | None = None) -> Rdd:
    return aggregate_messages(lambda s, sa, d, da, ea: [(d, 1)], SUM, g, chaos)


def connected_components(g: GraphRdd, *, chaos: ChaosSource | None = None,
                         max_iters: int = DEFAULT_MAX_ITERS, observer=None) -> PregelResult:
    """Each vertex ends with the smallest id reachable over edges in either direction."""

    def send(src, src_attr, dst, dst_attr, _):
        if src_attr < dst_attr:
            return [(dst, src_attr)]
        if dst_attr < src_attr:
            return [(src, dst_attr)]
        return []

    base = map_vertices(lambda vid, _: vid, g)
    return pregel(INT64_MAX, lambda _, attr, msg: min(attr, msg), send, MIN, base,
                  max_iters=max_iters, chaos=chaos, observer=observer)


def check_undirected(g: GraphRdd, *, allow_duplicates: bool = False) -> None:
    """Every edge must be stored once as ``(u, v)`` with ``u > v``."""
    seen = set()
    for e in g.edges():
        if not e.src > e.dst:
            raise EncodingViolation(f"edge ({e.src}, {e.dst}) must have source greater than destination")
        if not allow_duplicates and (e.src, e.dst) in seen:
            raise EncodingViolation(f"edge ({e.src}, {e.dst}) appears more than once")
        seen.add((e.src, e.dst))


def triangle_count(g: GraphRdd, chaos: ChaosSource | None = None) -> Rdd:
    """Per-vertex triangle counts; vertices without edges are absent."""
    check_undirected(g)
    adjacent = message_map(aggregate_messages(
        lambda s, sa, d, da, ea: [(d, frozenset([s])), (s, frozenset([d]))], UNION, g, chaos))
    with_adj = map_vertices(lambda v, _: adjacent[v] - {v} if v in adjacent else frozenset(), g)
    sums = aggregate_messages(
        lambda s, sa, d, da, ea: [(d, len(sa & da)), (s, len(sa & da))], SUM, with_adj, chaos)
    return tuple(tuple(type(p)(p.key, p.value // 2) for p in part) for part in sums)


# CFL colouring -----------------------------------------------------------


@dataclass(frozen=True)
class CflState:
    """Vertex attribute: colour, colour distribution, active flag, PRNG state."""

    color: int
    dist: tuple[Fraction, ...]
    active: bool
    rng: tuple[int, int]

    def dist_floats(self) -> list[float]:
        return [float(p) for p in self.dist]


def as_fraction(beta) -> Fraction:
    # via the decimal text, so 0.1 means one tenth rather than its binary neighbour
    return beta if isinstance(beta, Fraction) else Fraction(str(beta))


def cfl_update_distribution(dist: Sequence[Fraction], color: int, beta, active: bool) -> tuple[Fraction, ...]:
    """Next distribution from the current one and the current colour (1-based)."""
    k = len(dist)
    if not active or k == 1:
        return tuple(Fraction(1 if i == color else 0) for i in range(1, k + 1))
    b = as_fraction(beta)
    return tuple(w * (1 - b) + (0 if i == color else b / (k - 1)) for i, w in enumerate(dist, start=1))


def sample_color(dist: Sequence[Fraction], p: float) -> int:
    """1 plus the number of cumulative masses below ``p``."""
    color, mass = 1, Fraction(0)
    for w in dist:
        mass += w
        if mass < p:
            color += 1
    return color


def _validate_cfl(k: int, beta) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    b = as_fraction(beta)
    if not 0 < b < 1:
        raise ValueError("beta must lie strictly between 0 and 1")


def cfl_base_graph(g: GraphRdd, k: int, seed: int) -> GraphRdd:
    uniform = tuple(Fraction(1, k) for _ in range(k))

    def init(vid, _):
        rng = ChaosSource(derive_seed(seed, vid))
        color = 1 + rng.randbelow(k)
        return CflState(color, uniform, True, rng.state())

    return map_vertices(init, g)


def cfl_coloring(g: GraphRdd, k: int, beta=0.5, *, seed: int = 0, chaos: ChaosSource | None = None,
                 max_iters: int = DEFAULT_MAX_ITERS, observer=None) -> PregelResult:
    """Randomized k-colouring; converges exactly when the colouring is proper."""
    _validate_cfl(k, beta)
    check_undirected(g, allow_duplicates=True)
    b = as_fraction(beta)

    def vprog(_, st: CflState, active: bool) -> CflState:
        dist = cfl_update_distribution(st.dist, st.color, b, active)
        rng = ChaosSource(*st.rng)
        p = rng.random()
        color = sample_color(dist, p) if active else st.color
        return CflState(color, dist, active, rng.state())

    def send(src, sa: CflState, dst, da: CflState, _):
        if sa.color == da.color:
            return [(src, True), (dst, True)]
        out = []
        if sa.active:
            out.append((src, False))
        if da.active:
            out.append((dst, False))
        return out

    return pregel(True, vprog, send, OR, cfl_base_graph(g, k, seed), max_iters=max_iters, chaos=chaos,
                  observer=observer)


def coloring_of(result: PregelResult) -> dict:
    return {vid: st.color for vid, st in result.attrs.items()}


def is_proper(g: GraphRdd, colors: dict) -> bool:
    return all(colors[e.src] != colors[e.dst] for e in g.edges())


def triangle_map(g: GraphRdd) -> dict:
    return message_map(triangle_count(g))


def components_map(g: GraphRdd) -> dict:
    return connected_components(g).attrs

