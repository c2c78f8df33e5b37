from __future__ import annotations

from fractions import Fraction

import pytest
from brute import components as relaxed_components
from graphs import directed_graphs, undirected_graphs
from hypothesis import given, settings
from hypothesis import strategies as st

from sparkdet.chaos import MASK64, ChaosSource
from sparkdet.errors import DanglingEdge, DuplicateVertex, EncodingViolation
from sparkdet.graphx import (
    Edge,
    GraphRdd,
    aggregate_messages,
    aggregate_messages_with_active_set,
    brute_force_triangles,
    build_graph,
    cfl_coloring,
    cfl_update_distribution,
    coloring_of,
    connected_components,
    direct_in_degrees,
    in_degrees,
    is_proper,
    join_graph,
    map_vertices,
    message_map,
    pregel,
    representations,
    same_graph,
    sample_color,
    triangle_count,
    union_find_components,
)
from sparkdet.graphx import graph as graph_module
from sparkdet.opdsl import resolve
from sparkdet.values import Pair

SUM = resolve("sum_i64_wrapping")
to_dst = lambda s, sa, d, da, ea: [(d, 1)]  # noqa: E731
seeds = st.integers(0, MASK64)


def g_of(edges, vertices=None):
    return build_graph(edges, vertices)


class TestModel:
    def test_auto_created_vertices(self):
        g = build_graph([(1, 2)], [(1, "a")], default_attr="?")
        assert g.attrs() == {1: "a", 2: "?"}

    def test_duplicate_vertex(self):
        with pytest.raises(DuplicateVertex):
            build_graph([], [(1, None), (1, None)])
        with pytest.raises(DuplicateVertex):
            GraphRdd(((Pair(1, 0),), (Pair(1, 0),)), ()).attrs()

    def test_dangling_edge(self):
        g = GraphRdd(((Pair(1, 0),),), ((Edge(1, 2),),))
        with pytest.raises(DanglingEdge):
            g.validate()
        with pytest.raises(DanglingEdge):
            aggregate_messages(to_dst, SUM, g)

    def test_same_graph_ignores_partitioning(self):
        g = g_of([(1, 2), (3, 2)])
        assert all(same_graph(g, r) for r in representations(g))


class TestMessages:
    def test_empty_active_set(self):
        assert aggregate_messages_with_active_set(to_dst, SUM, [], g_of([(1, 2)])) == ()

    def test_two_messages(self):
        assert message_map(aggregate_messages(to_dst, SUM, g_of([(1, 2), (3, 2)]))) == {2: 2}

    def test_only_active_edges_send(self):
        g = g_of([(1, 2), (3, 4)])
        assert message_map(aggregate_messages_with_active_set(to_dst, SUM, [3], g)) == {4: 1}

    def test_map_and_join(self):
        g = g_of([(1, 2)], [(1, 10), (2, 20)])
        assert map_vertices(lambda v, a: a, g) == g
        assert join_graph(lambda v, a, m: m, g, ()) == g
        j = join_graph(lambda v, a, m: m, g, ((Pair(2, 99),),))
        assert j.attrs() == {1: 10, 2: 99}

    @given(directed_graphs(), seeds)
    def test_message_keys_unique(self, g, seed):
        msgs = aggregate_messages(lambda s, sa, d, da, ea: [(d, 1), (s, 1)], SUM, g, ChaosSource(seed))
        keys = [p.key for part in msgs for p in part]
        assert len(keys) == len(set(keys))


class TestPregel:
    def test_silent_send(self):
        res = pregel(0, lambda v, a, m: a, lambda *a: [], SUM, g_of([(1, 2)], [(1, 5), (2, 6)]))
        assert res.iterations == 0 and res.converged and res.attrs == {1: 5, 2: 6}

    def test_max_iters_zero_flags(self):
        g = map_vertices(lambda v, _: v, g_of([(2, 1)]))
        res = connected_components(g, max_iters=0)
        assert res.iterations == 0 and not res.converged

    def test_iteration_limit_returns_partial(self):
        ping = lambda s, sa, d, da, ea: [(d, 1)]  # noqa: E731
        res = pregel(0, lambda v, a, m: a + m, ping, SUM, g_of([(1, 2), (2, 1)], [(1, 0), (2, 0)]), max_iters=5)
        assert res.iterations == 5 and not res.converged

    @settings(max_examples=50)
    @given(directed_graphs(), seeds)
    def test_active_set_is_previous_receivers(self, g, seed):
        calls = []
        real = graph_module.aggregate_messages_with_active_set

        def spy(send, merge, active, gr, chaos=None):
            out = real(send, merge, active, gr, chaos)
            calls.append((frozenset(active), frozenset(message_map(out))))
            return out

        graph_module.aggregate_messages_with_active_set = spy
        try:
            connected_components(g, chaos=ChaosSource(seed))
        finally:
            graph_module.aggregate_messages_with_active_set = real
        assert calls
        # first call is the full-graph send; each later active set is the previous call's receivers
        for (_, received), (active, _) in zip(calls, calls[1:]):
            assert active == received


class TestAlgorithms:
    def test_in_degrees(self):
        assert message_map(in_degrees(g_of([(1, 2), (3, 2)]))) == {2: 2}
        assert message_map(in_degrees(g_of([], [(1, None)]))) == {}
        assert message_map(in_degrees(g_of([(1, 1)]))) == {1: 1}

    def test_components_examples(self):
        path = g_of([(1, 2), (2, 3)], [(4, None)])
        assert connected_components(path).attrs == {1: 1, 2: 1, 3: 1, 4: 4}
        assert connected_components(g_of([], [(1, None), (2, None)])).attrs == {1: 1, 2: 2}
        assert connected_components(g_of([(1, 2), (3, 4)])).attrs == {1: 1, 2: 1, 3: 3, 4: 3}

    def test_triangle_examples(self):
        assert message_map(triangle_count(g_of([(2, 1), (3, 1), (3, 2)]))) == {1: 1, 2: 1, 3: 1}
        assert set(message_map(triangle_count(g_of([(2, 1), (3, 1), (4, 3)]))).values()) == {0}
        k4 = [(u, v) for u in range(1, 5) for v in range(1, 5) if u > v]
        assert message_map(triangle_count(g_of(k4))) == {1: 3, 2: 3, 3: 3, 4: 3}

    @pytest.mark.parametrize("edges", [[(1, 2)], [(2, 2)], [(2, 1), (2, 1)]])
    def test_triangle_encoding(self, edges):
        with pytest.raises(EncodingViolation):
            triangle_count(g_of(edges))

    @settings(max_examples=100)
    @given(directed_graphs(), seeds)
    def test_components_match_union_find(self, g, seed):
        got = connected_components(g, chaos=ChaosSource(seed)).attrs
        assert got == union_find_components(g)
        assert got == relaxed_components(g.vertex_ids(), [(e.src, e.dst) for e in g.edges()])

    @settings(max_examples=100)
    @given(undirected_graphs(), seeds)
    def test_triangles_match_brute_force(self, g, seed):
        assert message_map(triangle_count(g, ChaosSource(seed))) == brute_force_triangles(g)

    @settings(max_examples=100)
    @given(directed_graphs(), seeds)
    def test_in_degrees_match_counting(self, g, seed):
        assert message_map(in_degrees(g, ChaosSource(seed))) == direct_in_degrees(g)


class TestCfl:
    def test_update_example(self):
        uniform = (Fraction(1, 3),) * 3
        assert cfl_update_distribution(uniform, 1, 0.5, True) == (Fraction(1, 6), Fraction(5, 12), Fraction(5, 12))

    def test_inactive_update_is_point_mass(self):
        assert cfl_update_distribution((Fraction(1, 2), Fraction(1, 2)), 2, 0.5, False) == (0, 1)

    def test_sample_color(self):
        d = (Fraction(1, 6), Fraction(5, 12), Fraction(5, 12))
        assert sample_color(d, 0.0) == 1
        assert sample_color(d, 0.1) == 1
        assert sample_color(d, 0.2) == 2
        assert sample_color(d, 0.99) == 3

    def test_single_vertex(self):
        res = cfl_coloring(g_of([], [(1, None)]), 1)
        assert res.iterations == 0 and res.converged and coloring_of(res) == {1: 1}

    def test_triangle(self):
        g = g_of([(2, 1), (3, 1), (3, 2)])
        res = cfl_coloring(g, 3, seed=11)
        assert res.converged and sorted(coloring_of(res).values()) == [1, 2, 3]

    def test_reproducible(self):
        g = g_of([(2, 1), (3, 1), (3, 2), (4, 3)])
        a = cfl_coloring(g, 3, seed=5, chaos=ChaosSource(1))
        b = cfl_coloring(g, 3, seed=5, chaos=ChaosSource(1))
        assert coloring_of(a) == coloring_of(b) and a.iterations == b.iterations

    @pytest.mark.parametrize("k,beta", [(0, 0.5), (3, 0), (3, 1), (3, 1.5)])
    def test_parameter_checks(self, k, beta):
        with pytest.raises(ValueError):
            cfl_coloring(g_of([(2, 1)]), k, beta)

    def test_requires_undirected_encoding(self):
        with pytest.raises(EncodingViolation):
            cfl_coloring(g_of([(1, 2)]), 3)

    @settings(max_examples=60)
    @given(undirected_graphs(connected=True), seeds, st.sampled_from([0.25, 0.5, 0.9]))
    def test_invariants(self, g, seed, beta):
        deg: dict = {}
        for e in g.edges():
            deg[e.src] = deg.get(e.src, 0) + 1
            deg[e.dst] = deg.get(e.dst, 0) + 1
        k = max(deg.values(), default=0) + 1

        def observe(_, cur, __):
            for st_ in cur.attrs().values():
                assert sum(st_.dist) == 1
                assert abs(sum(st_.dist_floats()) - 1.0) <= 1e-9
                if not st_.active:
                    assert st_.dist[st_.color - 1] == 1

        res = cfl_coloring(g, k, beta, seed=seed, chaos=ChaosSource(seed), max_iters=2000, observer=observe)
        if res.converged:
            assert is_proper(g, coloring_of(res))


@settings(max_examples=30)
@given(directed_graphs(max_vertices=4, max_edges=4))
def test_sum_messages_agree_across_representations(g):
    send = lambda s, sa, d, da, ea: [(d, s), (s, d)]  # noqa: E731
    expected = message_map(aggregate_messages(send, SUM, g))
    for r in representations(g):
        assert message_map(aggregate_messages(send, SUM, r)) == expected
