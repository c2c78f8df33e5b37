from __future__ import annotations

import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparkdet.chaos import MASK64, ChaosSource, derive_seed, trial_sources
from sparkdet.core import (
    Partitioning,
    all_partitionings,
    all_reduction_orders,
    chaotic_concat_map,
    chaotic_map,
    compositions,
    contiguous,
    count_partitionings,
    flatten,
    random_plan,
    repartition,
    repartition_into,
    shuffle,
)
from sparkdet.errors import CapExceeded, InvalidPlan
from sparkdet.values import Pair, Some, canon, from_json, make_set, to_json, values_equal

seeds = st.integers(0, MASK64)
small_lists = st.lists(st.integers(-5, 5), max_size=12)


class TestChaosSource:
    def test_same_state_same_stream(self):
        a, b = ChaosSource(42), ChaosSource(42)
        assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]

    def test_resume_from_snapshot(self):
        a = ChaosSource(7)
        a.next_u64()
        snap = a.state()
        rest = [a.next_u64() for _ in range(3)]
        assert [ChaosSource(*snap).next_u64() for _ in range(1)] == rest[:1]

    def test_rejects_out_of_range_seed(self):
        with pytest.raises(ValueError):
            ChaosSource(-1)
        with pytest.raises(ValueError):
            ChaosSource(1 << 64)

    def test_trial_sources_are_distinct(self):
        firsts = {ch.next_u64() for ch in trial_sources(0, 200)}
        assert len(firsts) == 200

    def test_derive_seed_depends_on_labels(self):
        assert derive_seed(1, 2) != derive_seed(1, 3)
        assert derive_seed(1, 2) == derive_seed(1, 2)

    @given(seeds, st.integers(1, 50))
    def test_randbelow_in_range(self, seed, n):
        ch = ChaosSource(seed)
        assert all(0 <= ch.randbelow(n) < n for _ in range(20))

    @given(seeds)
    def test_random_unit_interval(self, seed):
        ch = ChaosSource(seed)
        assert all(0.0 <= ch.random() < 1.0 for _ in range(20))

    def test_split_children_independent_of_parent_stream(self):
        parent = ChaosSource(3)
        child = parent.split()
        assert child.seed != parent.seed


class TestChaoticPrimitives:
    def test_shuffle_empty(self):
        assert shuffle(ChaosSource(0), []) == []

    def test_shuffle_three_reaches_all_six(self):
        seen = {tuple(shuffle(ch, [0, 1, 2])) for ch in trial_sources(5, 300)}
        assert len(seen) == 6

    def test_repartition_two_elements_outcomes(self):
        seen = {repartition(ch, [0, 1]) for ch in trial_sources(1, 200)}
        assert seen == {((0,), (1,)), ((1,), (0,)), ((0, 1),), ((1, 0),)}

    def test_repartition_empty_and_singleton(self):
        assert repartition(ChaosSource(0), []) == ()
        assert repartition(ChaosSource(9), [7]) == ((7,),)

    def test_chaotic_map_even(self):
        seen = {tuple(chaotic_map(ch, lambda x: x % 2 == 0, [0, 1])) for ch in trial_sources(2, 100)}
        assert seen == {(True, False), (False, True)}

    def test_chaotic_map_edges(self):
        assert chaotic_map(ChaosSource(0), lambda x: x, []) == []
        assert chaotic_map(ChaosSource(0), lambda x: -x, [5]) == [-5]

    def test_chaotic_concat_map_factors(self):
        fact = {2: (1, 2), 3: (1, 3)}
        seen = {tuple(chaotic_concat_map(ch, fact.__getitem__, [2, 3])) for ch in trial_sources(4, 100)}
        assert seen == {(1, 2, 1, 3), (1, 3, 1, 2)}
        assert chaotic_concat_map(ChaosSource(0), lambda x: (x,), []) == []
        assert chaotic_concat_map(ChaosSource(0), lambda x: (x,), ["a"]) == ["a"]

    @given(seeds, small_lists)
    def test_shuffle_preserves_multiset(self, seed, xs):
        assert Counter(shuffle(ChaosSource(seed), xs)) == Counter(xs)

    @given(seeds, small_lists.filter(bool))
    def test_repartition_nonempty_blocks(self, seed, xs):
        rdd = repartition(ChaosSource(seed), xs)
        assert all(rdd)
        assert Counter(flatten(rdd)) == Counter(xs)

    @given(seeds, small_lists.filter(bool), st.integers(1, 20))
    def test_repartition_into_block_count(self, seed, xs, parts):
        rdd = repartition_into(ChaosSource(seed), xs, parts)
        assert len(rdd) == min(parts, len(xs))
        assert all(rdd)
        assert Counter(flatten(rdd)) == Counter(xs)

    @given(seeds, small_lists)
    def test_replay_reproduces(self, seed, xs):
        a = ChaosSource(seed)
        snap = a.state()
        first = repartition(a, xs)
        assert repartition(ChaosSource(*snap), xs) == first

    def test_contiguous_slices(self):
        assert contiguous(list(range(5)), 2) == ((0, 1), (2, 3, 4))
        assert contiguous([], 3) == ()
        assert contiguous([1], 4) == ((1,),)


class TestEnumerators:
    def test_singleton(self):
        assert list(all_partitionings(["a"])) == [(("a",),)]

    def test_empty_list(self):
        assert list(all_partitionings([])) == [()]

    def test_three_elements_count(self):
        # 24 from the independent enumeration in tests/brute.py
        assert sum(1 for _ in all_partitionings([1, 2, 3])) == 24

    @pytest.mark.parametrize("n", range(1, 7))
    def test_count_and_no_duplicates(self, n):
        rdds = list(all_partitionings(list(range(n))))
        assert len(rdds) == len(set(rdds)) == math.factorial(n) * 2 ** (n - 1) == count_partitionings(n)

    def test_empty_blocks_variant(self):
        rdds = list(all_partitionings([1, 2], allow_empty_blocks=True))
        assert any(() in r for r in rdds)
        assert len(rdds) == len(set(rdds))
        assert all(sum(1 for p in r if not p) <= 1 for r in rdds)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            next(all_partitionings(list(range(7))))
        with pytest.raises(CapExceeded):
            next(all_reduction_orders(7))

    def test_reduction_orders(self):
        assert list(all_reduction_orders(1)) == [()]
        assert list(all_reduction_orders(2)) == [(0,)]
        assert len(list(all_reduction_orders(3))) == 2
        with pytest.raises(InvalidPlan):
            next(all_reduction_orders(0))

    @given(seeds, st.integers(1, 8))
    def test_random_plan_shape(self, seed, n):
        plan = random_plan(ChaosSource(seed), n)
        assert len(plan) == n - 1
        assert all(0 <= i < n - 1 - step for step, i in enumerate(plan))

    def test_compositions(self):
        assert list(compositions(0)) == [()]
        assert sorted(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]

    def test_partitioning_validation(self):
        with pytest.raises(ValueError):
            Partitioning((0, 0), (2,))
        with pytest.raises(ValueError):
            Partitioning((0, 1), (1,))
        assert Partitioning((1, 0), (1, 1)).apply(["a", "b"]) == (("b",), ("a",))


class TestValues:
    def test_int_float_bool_distinct(self):
        assert not values_equal(1, 1.0)
        assert not values_equal(1, True)

    def test_nan_equal_and_signed_zero_distinct(self):
        assert values_equal(float("nan"), -float("nan"))
        assert not values_equal(0.0, -0.0)

    def test_sets_dedup_structurally(self):
        assert len(make_set([1, 1, 2])) == 2

    @given(st.recursive(
        st.one_of(st.integers(-2**63, 2**63 - 1), st.floats(allow_nan=False), st.booleans(), st.text(max_size=4),
                  st.none()),
        lambda inner: st.one_of(st.lists(inner, max_size=3).map(tuple),
                                st.tuples(inner, inner).map(lambda t: Pair(*t)),
                                inner.map(Some)),
        max_leaves=8))
    def test_json_round_trip(self, v):
        assert canon(from_json(to_json(v))) == canon(v)
