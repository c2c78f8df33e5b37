from __future__ import annotations

import pytest
from brute import aggregate_outputs, reduce_outputs, tree_reduce_outputs
from hypothesis import given, settings
from hypothesis import strategies as st

from sparkdet.detcheck import (
    DETERMINISTIC,
    NON_DETERMINISTIC,
    UNKNOWN,
    Domain,
    check,
    check_aggregate,
    check_aggregate_by_key,
    check_aggregate_messages,
    check_homomorphism,
    check_monoid_laws,
    check_reduce,
    check_reduce_by_key,
    check_tree_aggregate,
    check_tree_reduce,
    cross_validate,
    oracle,
    oracle_aggregate,
    oracle_by_key,
    oracle_reduce,
    oracle_tree,
    oracle_tree_reduce,
    parse_domain,
    replay,
    shrink,
    sweep,
)
from sparkdet.detcheck.laws import evaluate_law
from sparkdet.detcheck.runner import as_pairs
from sparkdet.detcheck.verdict import same_outcome
from sparkdet.errors import ParseError, SortMismatch
from sparkdet.opdsl import OperatorTriple, resolve
from sparkdet.values import Pair

R = resolve
INTS = Domain.int_range(-2, 2)
FP = Domain((1e20, -1e20, 600.0))
SUM_T = OperatorTriple(0, R("sum_i64_wrapping"), R("sum_i64_wrapping"))
FP_T = OperatorTriple(0.0, R("sum_f64"), R("sum_f64"))


def laws(reports):
    return {r.law: r for r in reports}


def assert_replays(v):
    cx = v.counterexample
    assert cx is not None
    a, b = replay(cx, ops_of(v))
    assert same_outcome(a, cx.out_a) and same_outcome(b, cx.out_b)
    assert not same_outcome(a, b)


_OPS: dict = {}


def ops_of(v):
    return _OPS[id(v)]


def run_check(fn, ops, dom, **kw):
    v = fn(ops, dom, **kw)
    _OPS[id(v)] = ops
    return v


class TestMonoidLaws:
    def test_wrapping_sum_holds(self):
        r = laws(check_monoid_laws(R("sum_i64_wrapping"), 0, INTS))
        assert all(r[k].status == "holds" for k in ("identity", "commutativity", "associativity"))

    def test_fp_associativity_witness(self):
        r = laws(check_monoid_laws(R("sum_f64"), 0.0, FP))["associativity"]
        assert r.violated and r.witness == (1e20, -1e20, 600.0)
        assert (r.lhs, r.rhs) == (600.0, 0.0)

    def test_concat_commutativity_witness(self):
        r = laws(check_monoid_laws(R("concat_list"), (), Domain(((1,), (2,)))))["commutativity"]
        assert r.violated and r.witness == ((1,), (2,))

    def test_violated_witness_re_evaluates(self):
        for r in check_monoid_laws(R("sub_i64"), 0, INTS):
            if r.violated and r.law != "closure":
                lhs, rhs = evaluate_law(r.law, comb=R("sub_i64"), zero=0, witness=r.witness)
                assert not same_outcome(lhs, rhs)

    def test_sort_mismatch(self):
        with pytest.raises(SortMismatch):
            check_monoid_laws(R("sum_i64"), 0, FP)


class TestHomomorphism:
    def test_sum(self):
        assert check_homomorphism(SUM_T, INTS).status == "holds"

    def test_sub_seq_with_sum_comb(self):
        assert check_homomorphism(OperatorTriple(0, R("sub_i64"), R("sum_i64")), Domain.int_range(-3, 3)).status == "holds"

    def test_product_seq_fails(self):
        t = OperatorTriple(0.0, R("expr:x*y"), R("sum_f64"))
        r = check_homomorphism(t, Domain.int_range(-3, 3))
        assert r.violated
        # the hand-worked witness d=3, e=2: 2*3 = 6 but 2 + 0*3 = 2
        assert evaluate_law("homomorphism", seq=t.seq, comb=t.comb, zero=0.0, witness=(3, 2.0)) == (6.0, 2.0)


class TestVerdicts:
    def test_aggregate_examples(self):
        assert check_aggregate(SUM_T, INTS).status == DETERMINISTIC
        v = run_check(check_aggregate, FP_T, FP)
        assert v.status == NON_DETERMINISTIC and "associativity" in v.failed_laws
        assert_replays(v)
        t = OperatorTriple((), R("append"), R("concat_list"))
        v = run_check(check_aggregate, t, INTS)
        assert v.status == NON_DETERMINISTIC and v.failed_laws == ["commutativity"]
        assert_replays(v)

    def test_reduce_examples(self):
        assert check_reduce(R("max_i64"), INTS).status == DETERMINISTIC
        v = run_check(check_reduce, R("sub_i64"), Domain((1, 2, 3)))
        assert v.status == NON_DETERMINISTIC
        assert laws(v.law_reports)["commutativity"].witness == (1, 2)
        assert_replays(v)
        sets = Domain(tuple(frozenset([i]) for i in range(3)))
        assert check_reduce(R("union_set"), sets).status == DETERMINISTIC

    def test_delegation_labels(self):
        assert "aggregate" in check_tree_aggregate(SUM_T, INTS).label
        assert check_tree_reduce(R("max_i64"), INTS).status == DETERMINISTIC
        assert check_aggregate_by_key(SUM_T, INTS).status == DETERMINISTIC
        v = run_check(check_reduce_by_key, R("sub_i64"), INTS)
        assert v.status == NON_DETERMINISTIC and "reduce" in v.label
        assert_replays(v)
        v = run_check(check_tree_aggregate, FP_T, FP)
        assert v.status == NON_DETERMINISTIC
        assert_replays(v)

    def test_aggregate_messages_sufficient_only(self):
        assert check_aggregate_messages(R("sum_i64_wrapping"), INTS).status == DETERMINISTIC
        assert check_aggregate_messages(R("min_i64"), INTS).status == DETERMINISTIC
        v = check_aggregate_messages(R("sub_i64"), INTS)
        assert v.status == UNKNOWN and "commutativity" in v.failed_laws

    def test_constant_comb_warning_not_in_verdict(self):
        v = check_aggregate(OperatorTriple(0, R("sum_i64"), R("first")), INTS)
        assert any("ignores its second argument" in w for w in v.warnings)

    def test_sort_samples_make_verdict_unknown(self):
        dom = Domain((1.0, 2.0), sort_samples=(1e20, -1e20, 600.0))
        v = check_aggregate(FP_T, dom)
        assert v.status == UNKNOWN and v.cause == "sort-samples"

    def test_budget_exhaustion_is_unknown(self):
        v = check_aggregate(OperatorTriple(0.0, R("expr:x+y/3"), R("expr:x+y/3")), Domain.int_range(-9, 9),
                            budget=10, steps=2)
        assert v.status in (UNKNOWN, NON_DETERMINISTIC)
        assert not any(r.status == "holds" and r.checked > 10 for r in v.law_reports if r.law == "associativity")

    def test_verdict_names_domain(self):
        assert check_aggregate(SUM_T, INTS).domain == "{-2..2}"

    def test_dispatch(self):
        assert check("reduce", R("max_i64"), INTS).status == DETERMINISTIC
        with pytest.raises(ValueError):
            check("nope", R("max_i64"), INTS)


class TestOracle:
    def test_sum_deterministic(self):
        v = oracle_aggregate(SUM_T, [1, 2, 3])
        assert v.status == DETERMINISTIC and v.exhaustive

    def test_fp_outputs_match_independent_enumeration(self):
        v = oracle_aggregate(FP_T, [-1e20, 600.0, 1e20])
        assert v.status == NON_DETERMINISTIC
        expected = aggregate_outputs(0.0, lambda a, b: a + b, lambda a, b: a + b, [-1e20, 600.0, 1e20])
        assert expected == {0.0, 600.0}
        assert {v.counterexample.out_a, v.counterexample.out_b} <= expected

    def test_empty_list(self):
        assert oracle_aggregate(SUM_T, []).status == DETERMINISTIC

    def test_tree_sum(self):
        assert oracle_tree(SUM_T, [1, 2, 3]).status == DETERMINISTIC

    def test_reduce_sub(self):
        v = oracle_reduce(R("sub_i64"), [1, 2, 3])
        assert v.status == NON_DETERMINISTIC
        # frozen from tests/brute.py: every reachable output
        assert reduce_outputs(lambda a, b: a - b, [1, 2, 3]) == {-4, -2, 0, 2, 4}
        assert {v.counterexample.out_a, v.counterexample.out_b} <= {-4, -2, 0, 2, 4}

    def test_tree_reduce_sub(self):
        v = oracle_tree_reduce(R("sub_i64"), [1, 2, 3])
        assert v.status == NON_DETERMINISTIC
        assert {v.counterexample.out_a, v.counterexample.out_b} <= tree_reduce_outputs(lambda a, b: a - b, [1, 2, 3])

    def test_by_key(self):
        t = OperatorTriple(-100, R("max_i64"), R("max_i64"))
        assert oracle_by_key(t, [Pair("a", 1), Pair("a", 5), Pair("b", 2)]).status == DETERMINISTIC
        assert oracle_by_key(R("max_i64"), [Pair("a", 1), Pair("a", 5), Pair("b", 2), Pair("b", 0)]).status \
            == DETERMINISTIC

    def test_beyond_cap_samples(self):
        v = oracle("aggregate", SUM_T, list(range(8)), cap=6, samples=50)
        assert v.status == UNKNOWN and not v.exhaustive
        v = oracle("aggregate", FP_T, [1e20, -1e20, 600.0] * 3, cap=6, samples=500)
        assert v.status == NON_DETERMINISTIC and not v.exhaustive

    def test_operator_error_is_a_distinct_cause(self):
        t = OperatorTriple(0, R("sum_i64_checked"), R("sum_i64_checked"))
        v = oracle("aggregate", t, [2**62, 2**62, -(2**62)])
        assert v.status == NON_DETERMINISTIC and v.cause == "operator-error"

    def test_shrink_keeps_replaying(self):
        v = oracle("reduce", R("sub_i64"), [5, 3, 9, 4])
        small = shrink(v.counterexample, R("sub_i64"))
        assert len(small.input) <= len(v.counterexample.input)
        a, b = replay(small, R("sub_i64"))
        assert not same_outcome(a, b)
        assert small.input == (0, 0) or len(small.input) == 2


class TestCrossValidate:
    def test_sum(self):
        r = cross_validate("aggregate", SUM_T, INTS, 4)
        assert r.agree and r.conditions.status == r.oracle.status == DETERMINISTIC

    def test_product_seq(self):
        r = cross_validate("aggregate", OperatorTriple(0.0, R("expr:x*y"), R("sum_f64")), INTS, 4)
        assert r.agree and r.oracle.status == NON_DETERMINISTIC

    def test_fp(self):
        r = cross_validate("aggregate", FP_T, Domain((-2.0, 0.0, 2.0, 1e20, -1e20, 600.0)), 4,
                           sample_lists=[[1e20, -1e20, 600.0]])
        assert r.agree and r.oracle.status == NON_DETERMINISTIC and r.lists_checked == 1


class TestParseDomain:
    def test_forms(self):
        assert parse_domain("-2..2").values == (-2, -1, 0, 1, 2)
        assert parse_domain("[1e20, 600.0]").values == (1e20, 600.0)
        d = parse_domain('{"values": [1.0], "samples": [5.0]}')
        assert d.sort_samples == (5.0,)

    @pytest.mark.parametrize("bad", ["3..1", "[", '{"x": 1}', "7"])
    def test_errors(self, bad):
        with pytest.raises(ParseError):
            parse_domain(bad)


INT_OPS = ["sum_i64_wrapping", "sub_i64", "max_i64", "min_i64", "mul_i64", "first", "second"]
FP_OPS = ["sum_f64", "expr:x*y", "expr:x-y", "expr:max(x, y)", "first"]


@st.composite
def triples(draw):
    """A sort-consistent triple over integers or floats, plus its element domain."""
    fp = draw(st.booleans())
    ops = FP_OPS if fp else INT_OPS
    seq, comb = R(draw(st.sampled_from(ops))), R(draw(st.sampled_from(ops)))
    z = draw(st.integers(-1, 1))
    values = sorted(draw(st.sets(st.integers(-2, 2), min_size=1, max_size=3)))
    if fp:
        return OperatorTriple(float(z), seq, comb), Domain(tuple(float(v) for v in values))
    return OperatorTriple(z, seq, comb), Domain(tuple(values))


@settings(max_examples=60)
@given(triples())
def test_counterexamples_replay(td):
    t, dom = td
    v = check_aggregate(t, dom, grade=3)
    if v.status == NON_DETERMINISTIC:
        a, b = replay(v.counterexample, t)
        assert not same_outcome(a, b)


@settings(max_examples=60)
@given(triples(), st.sets(st.integers(-2, 2), max_size=2))
def test_enlarging_domain_keeps_non_determinism(td, extra):
    t, dom = td
    conv = float if type(t.zero) is float else int
    bigger = Domain(tuple(sorted(set(dom.values) | {conv(x) for x in extra})))
    if check_aggregate(t, dom, grade=3).status == NON_DETERMINISTIC:
        assert check_aggregate(t, bigger, grade=3).status == NON_DETERMINISTIC


@settings(max_examples=40)
@given(triples(), st.sampled_from(["aggregate", "treeAggregate", "aggregateByKey"]))
def test_laws_agree_with_oracle_on_small_domains(td, combinator):
    t, dom = td
    r = cross_validate(combinator, t, dom, 3)
    assert r.agree, r.to_json()


@settings(max_examples=30)
@given(st.sampled_from(INT_OPS + FP_OPS), st.sets(st.integers(-2, 2), min_size=1, max_size=3),
       st.sampled_from(["reduce", "treeReduce", "reduceByKey"]))
def test_reduce_laws_agree_with_oracle(comb, values, combinator):
    op = R(comb)
    conv = float if comb in FP_OPS and comb != "first" else int
    dom = Domain(tuple(conv(v) for v in sorted(values)))
    r = cross_validate(combinator, op, dom, 3)
    assert r.agree, r.to_json()


def test_sweep_by_key_uses_keys():
    v = sweep("reduceByKey", R("sub_i64"), [1, 2], 2, keys=("a",))
    assert v.status == NON_DETERMINISTIC
    assert all(p.key == "a" for p in v.counterexample.input)
    assert as_pairs([1])[0] == Pair("k", 1)


@pytest.mark.parametrize("zero,seq,comb,dom,expected", [
    # comb(z, z) != z needs two empty partitions, which treeAggregate never sees
    (-1, "max_i64", "mul_i64", (0,), {"aggregate": "nonDeterministic", "treeAggregate": "deterministic",
                                      "aggregateByKey": "deterministic"}),
    # only a right identity fails; by key the zero is always the leftmost accumulator
    (0, "max_i64", "second", (1,), {"aggregate": "nonDeterministic", "treeAggregate": "nonDeterministic",
                                    "aggregateByKey": "deterministic"}),
])
def test_zero_placement_per_combinator(zero, seq, comb, dom, expected):
    t = OperatorTriple(zero, R(seq), R(comb))
    for combinator, status in expected.items():
        r = cross_validate(combinator, t, Domain(dom), 3)
        assert r.agree and r.conditions.status == status, (combinator, r.to_json())
