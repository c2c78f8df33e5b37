"""Graph Rdds and the message-passing combinators built on reduceByKey."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

from .. import combinators as C
from ..chaos import ChaosSource
from ..core import Rdd, compositions, contiguous, distinct_permutations, make_rdd
from ..errors import DanglingEdge, DuplicateVertex
from ..values import Pair, canon

VertexId = int
SendMsg = Callable[[VertexId, Any, VertexId, Any, Any], Iterable[tuple[VertexId, Any]]]


@dataclass(frozen=True)
class Edge:
    src: VertexId
    dst: VertexId
    attr: Any = None


@dataclass(frozen=True)
class GraphRdd:
    """Vertex Rdd of ``Pair(id, attr)`` plus edge Rdd of :class:`Edge`."""

    vertex_rdd: Rdd
    edge_rdd: Rdd

    def vertices(self) -> list[Pair]:
        return [p for part in self.vertex_rdd for p in part]

    def edges(self) -> list[Edge]:
        return [e for part in self.edge_rdd for e in part]

    def vertex_ids(self) -> list[VertexId]:
        return [p.key for p in self.vertices()]

    def attrs(self) -> dict:
        """``{id: attr}``; raises DuplicateVertex if an id repeats."""
        out: dict = {}
        for p in self.vertices():
            if p.key in out:
                raise DuplicateVertex(f"vertex {p.key} appears more than once")
            out[p.key] = p.value
        return out

    def validate(self) -> "GraphRdd":
        attrs = self.attrs()
        for e in self.edges():
            for end in (e.src, e.dst):
                if end not in attrs:
                    raise DanglingEdge(f"edge {e.src}->{e.dst} references missing vertex {end}")
        return self

    def edge_key(self) -> list:
        return sorted((e.src, e.dst, canon(e.attr)) for e in self.edges())


def build_graph(edges: Iterable, vertices: Iterable | None = None, *, default_attr: Any = None,
                vertex_parts: int = 1, edge_parts: int = 1) -> GraphRdd:
    """Graph from ``(src, dst[, attr])`` edges and optional ``(id, attr)`` vertices.

    Endpoints without a vertex entry are created with ``default_attr``.
    """
    es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
    vs: dict = {}
    for item in vertices or ():
        vid, attr = (item.key, item.value) if isinstance(item, Pair) else item
        if vid in vs:
            raise DuplicateVertex(f"vertex {vid} listed twice")
        vs[vid] = attr
    for e in es:
        for end in (e.src, e.dst):
            vs.setdefault(end, default_attr)
    vlist = [Pair(v, a) for v, a in vs.items()]
    return GraphRdd(contiguous(vlist, vertex_parts), contiguous(es, edge_parts)).validate()


def same_graph(a: GraphRdd, b: GraphRdd) -> bool:
    """Equal vertex maps and equal edge multisets, whatever the partitioning."""
    va = {k: canon(v) for k, v in a.attrs().items()}
    vb = {k: canon(v) for k, v in b.attrs().items()}
    return va == vb and a.edge_key() == b.edge_key()


def _layouts(items: Sequence) -> Iterator[Rdd]:
    n = len(items)
    for perm in distinct_permutations(items, key=lambda x: x):
        for sizes in compositions(n):
            out, at = [], 0
            for s in sizes:
                out.append(tuple(items[i] for i in perm[at:at + s]))
                at += s
            yield tuple(out)


def representations(g: GraphRdd) -> Iterator[GraphRdd]:
    """Every re-partitioning of the vertex and edge lists of ``g``."""
    vs, es = g.vertices(), g.edges()
    v_layouts = list(_layouts(vs))
    e_layouts = list(_layouts(es)) if es else [()]
    for vr, er in itertools.product(v_layouts, e_layouts):
        yield GraphRdd(vr, er)


# combinators -------------------------------------------------------------


def aggregate_messages_with_active_set(send: SendMsg, merge, active: Iterable[VertexId], g: GraphRdd,
                                       chaos: ChaosSource | None = None) -> Rdd:
    """Message Rdd from ``send`` on every edge touching ``active``, merged per vertex.

    With ``chaos`` the merge runs as the chaotic reduceByKey; without it the
    partition order of the edge Rdd is used as is.
    """
    active = set(active)
    attrs = g.attrs()

    def attr_of(e: Edge, vid: VertexId):
        try:
            return attrs[vid]
        except KeyError:
            raise DanglingEdge(f"edge {e.src}->{e.dst} references missing vertex {vid}") from None

    def on_edge(e: Edge) -> list[Pair]:
        if e.src not in active and e.dst not in active:
            return []
        msgs = send(e.src, attr_of(e, e.src), e.dst, attr_of(e, e.dst), e.attr)
        return [m if isinstance(m, Pair) else Pair(*m) for m in msgs]

    pair_rdd = make_rdd([m for e in part for m in on_edge(e)] for part in g.edge_rdd)
    if chaos is not None:
        return C.reduce_by_key(chaos, merge, pair_rdd)
    return C.reduce_by_key_dt(merge, pair_rdd)


def aggregate_messages(send: SendMsg, merge, g: GraphRdd, chaos: ChaosSource | None = None) -> Rdd:
    return aggregate_messages_with_active_set(send, merge, g.vertex_ids(), g, chaos)


def message_map(msgs: Rdd) -> dict:
    return C.to_mapping(msgs)


def map_vertices(f: Callable[[VertexId, Any], Any], g: GraphRdd) -> GraphRdd:
    vr = tuple(tuple(Pair(p.key, f(p.key, p.value)) for p in part) for part in g.vertex_rdd)
    return GraphRdd(vr, g.edge_rdd)


def join_graph(joiner: Callable[[VertexId, Any, Any], Any], g: GraphRdd, msgs: Rdd) -> GraphRdd:
    """Apply ``joiner`` where a message arrived; other vertices keep their attribute."""
    assoc = message_map(msgs)

    def update(vid, attr):
        return joiner(vid, attr, assoc[vid]) if vid in assoc else attr

    return map_vertices(update, g)


# pregel ------------------------------------------------------------------

DEFAULT_MAX_ITERS = 10_000


@dataclass
class PregelResult:
    graph: GraphRdd
    iterations: int
    converged: bool
    active_history: list[frozenset] = field(default_factory=list)

    @property
    def attrs(self) -> dict:
        return self.graph.attrs()


def pregel(init_msg, vprog, send: SendMsg, merge, g: GraphRdd, *, max_iters: int = DEFAULT_MAX_ITERS,
           chaos: ChaosSource | None = None, observer: Callable | None = None) -> PregelResult:
    """Vertex-centric fixpoint: join messages, resend from receivers, stop when silent.

    ``observer(iteration, graph, msgs)`` sees the graph after each join along
    with the message Rdd that produced it; iteration 0 is the initial graph
    and the first message Rdd. Hitting ``max_iters`` is not an error: the
    result is returned with ``converged=False``.
    """
    if max_iters < 0:
        raise ValueError("max_iters must be non-negative")
    cur = map_vertices(lambda vid, attr: vprog(vid, attr, init_msg), g)
    msgs = aggregate_messages(send, merge, cur, chaos)
    history: list[frozenset] = []
    if observer:
        observer(0, cur, msgs)
    it = 0
    while msgs and it < max_iters:
        it += 1
        cur = join_graph(vprog, cur, msgs)
        active = frozenset(message_map(msgs))
        history.append(active)
        msgs = aggregate_messages_with_active_set(send, merge, active, cur, chaos)
        if observer:
            observer(it, cur, msgs)
    return PregelResult(cur, it, not msgs, history)
