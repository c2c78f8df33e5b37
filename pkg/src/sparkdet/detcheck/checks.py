"""Determinism verdicts from algebraic laws checked on a finite domain.

A ``deterministic`` verdict here means no law failed on the domain. The
verdict always names the domain so that claim stays scoped.
"""

from __future__ import annotations

from typing import Sequence

from ..opdsl import Operator, OperatorTriple
from ..values import Value
from . import laws as L
from .domain import Domain
from .oracle import DEFAULT_CAP, counterexample_from_candidates
from .runner import (
    AGGREGATE,
    AGGREGATE_BY_KEY,
    AGGREGATE_MESSAGES,
    REDUCE,
    REDUCE_BY_KEY,
    TREE_AGGREGATE,
    TREE_REDUCE,
)
from .verdict import DETERMINISTIC, LAW_UNKNOWN, NON_DETERMINISTIC, UNKNOWN, LawReport, Verdict

DEFAULT_STEPS = 3
DEFAULT_MAX_SIZE = 1000


def _as_domain(dom) -> Domain:
    return dom if isinstance(dom, Domain) else Domain(tuple(dom))


def _check_sorts(op: Operator, first: Value, values: Sequence[Value]) -> None:
    for v in values:
        op.check(first, v)


def _closure_for(step, zero, dom: Domain, grade, steps, max_size, reduce_=False) -> L.Closure:
    depth = grade if grade is not None else steps
    size = None if grade is not None else max_size
    if reduce_:
        return L.reduce_closure(step, dom.values, depth, size)
    return L.seq_closure(step, zero, dom.values, depth, size)


def check_monoid_laws(comb: Operator, zero: Value, dom, *, seq: Operator | None = None, grade: int | None = None,
                      steps: int = DEFAULT_STEPS, max_size: int = DEFAULT_MAX_SIZE,
                      budget: int = L.DEFAULT_BUDGET, seed: int = 0) -> list[LawReport]:
    """Closure, identity, commutativity and associativity on the accumulator set.

    The accumulator set is the closure of ``{zero}`` under ``seq`` (``comb``
    when no ``seq`` is given) over the domain values.
    """
    dom = _as_domain(dom)
    step = seq or comb
    _check_sorts(step, zero, dom.values)
    closure = _closure_for(step, zero, dom, grade, steps, max_size)
    return L.check_monoid_laws(comb, zero, closure, grade=grade, budget=budget, seed=seed)


def check_homomorphism(triple: OperatorTriple, dom, *, grade: int | None = None, steps: int = DEFAULT_STEPS,
                       max_size: int = DEFAULT_MAX_SIZE, budget: int = L.DEFAULT_BUDGET, seed: int = 0) -> LawReport:
    """``seq(e, d) == comb(e, seq(zero, d))`` over domain values d and accumulators e."""
    dom = _as_domain(dom)
    _check_sorts(triple.seq, triple.zero, dom.values)
    closure = _closure_for(triple.seq, triple.zero, dom, grade, steps, max_size)
    return L.check_homomorphism_on(triple.seq, triple.comb, triple.zero, dom.values, closure,
                                   grade=grade, budget=budget, seed=seed)


def _candidates(report: LawReport, closure: L.Closure) -> list[list[tuple]]:
    """Input segments that should expose a violated law when run in different orders."""
    w = report.witness
    if report.law == "homomorphism":
        d, e = w
        le = closure.list_for(e)
        return [] if le is None else [[le, (d,)]]
    lists = L.depth_lists(closure, *w)
    if lists is None:
        return []
    return [lists]


def _undecided(report: LawReport) -> bool:
    # an unknown closure law is informational: the image approximation is just incomplete
    return report.status == LAW_UNKNOWN and report.law != "closure"


def _decide(combinator: str, ops, reports: list[LawReport], closure: L.Closure, sort_reports: list[LawReport],
            dom: Domain, label: str, warnings: list[str], cap: int) -> Verdict:
    evaluations = sum(r.checked for r in reports) + sum(r.checked for r in sort_reports)
    all_reports = tuple(reports) + tuple(sort_reports)
    common = dict(law_reports=all_reports, method="conditions", domain=dom.describe(), label=label,
                  evaluations=evaluations)
    violated = [r for r in reports if r.violated]
    if violated:
        cands = [c for r in violated for c in _candidates(r, closure)]
        cx = counterexample_from_candidates(combinator, ops, cands, cap=cap)
        if cx is not None:
            return Verdict(NON_DETERMINISTIC, cx, warnings=tuple(warnings), cause="law", **common)
        warnings = warnings + [f"law {violated[0].law} fails but no replayable counterexample was found"]
        return Verdict(UNKNOWN, warnings=tuple(warnings), cause="unreplayed-law", **common)
    if any(_undecided(r) for r in reports):
        return Verdict(UNKNOWN, warnings=tuple(warnings), cause="budget", exhaustive=False, **common)
    if any(r.violated for r in sort_reports):
        warnings = warnings + ["a law fails on accumulator-sort samples outside the computed image"]
        return Verdict(UNKNOWN, warnings=tuple(warnings), cause="sort-samples", **common)
    return Verdict(DETERMINISTIC, warnings=tuple(warnings), **common)


def _constant_warning(comb: Operator, closure: L.Closure) -> list[str]:
    side = L.ignored_argument(comb, closure.elems)
    if side is None:
        return []
    return [f"{comb.name} ignores its {side} argument on every accumulator checked; results may hide data"]


# aggregate folds comb from the zero, so an empty partition can pair the zero with itself.
# treeAggregate meets the zero only as one empty partition's result; aggregateByKey drops
# empty per-key blocks, so the zero is only ever the leftmost accumulator.
ZERO_ROLES = {TREE_AGGREGATE: L.ZERO_ONCE, AGGREGATE_BY_KEY: L.ZERO_LEFTMOST}


def _triple_verdict(combinator: str, triple: OperatorTriple, dom, label: str, *, grade, steps, max_size, budget,
                    seed, cap) -> Verdict:
    dom = _as_domain(dom)
    _check_sorts(triple.seq, triple.zero, dom.values)
    closure = _closure_for(triple.seq, triple.zero, dom, grade, steps, max_size)
    zero_role = ZERO_ROLES.get(combinator, L.ZERO_FREE)
    reports = L.check_monoid_laws(triple.comb, triple.zero, closure, grade=grade, budget=budget, seed=seed,
                                  zero_role=zero_role)
    reports.append(L.check_homomorphism_on(triple.seq, triple.comb, triple.zero, dom.values, closure,
                                           grade=grade, budget=budget, seed=seed))
    sort_reports: list[LawReport] = []
    if dom.sort_samples and grade is None:
        _check_sorts(triple.comb, triple.zero, dom.sort_samples)
        sc = L.sample_closure((triple.zero,) + dom.sort_samples)
        sort_reports = [r for r in L.check_monoid_laws(triple.comb, triple.zero, sc, budget=budget, seed=seed,
                                                       approximation="sort", zero_role=zero_role)
                        if r.law != "closure"]
        sort_reports.append(L.check_homomorphism_on(triple.seq, triple.comb, triple.zero, dom.values, sc,
                                                    budget=budget, seed=seed, approximation="sort"))
    return _decide(combinator, triple, reports, closure, sort_reports, dom, label,
                   _constant_warning(triple.comb, closure), cap)


def _comb_verdict(combinator: str, comb: Operator, dom, label: str, *, grade, steps, max_size, budget, seed,
                  cap) -> Verdict:
    dom = _as_domain(dom)
    for v in dom.values:
        comb.check(v, v)
    closure = _closure_for(comb, None, dom, grade, steps, max_size, reduce_=True)
    reports = L.check_semigroup_laws(comb, closure, grade=grade, budget=budget, seed=seed)
    sort_reports: list[LawReport] = []
    if dom.sort_samples and grade is None:
        for v in dom.sort_samples:
            comb.check(v, v)
        sc = L.sample_closure(dom.sort_samples)
        sort_reports = [r for r in L.check_semigroup_laws(comb, sc, budget=budget, seed=seed, approximation="sort")
                        if r.law != "closure"]
    return _decide(combinator, comb, reports, closure, sort_reports, dom, label,
                   _constant_warning(comb, closure), cap)


def _opts(grade, steps, max_size, budget, seed, cap) -> dict:
    return dict(grade=grade, steps=steps, max_size=max_size, budget=budget, seed=seed, cap=cap)


def check_aggregate(triple: OperatorTriple, dom, *, grade: int | None = None, steps: int = DEFAULT_STEPS,
                    max_size: int = DEFAULT_MAX_SIZE, budget: int = L.DEFAULT_BUDGET, seed: int = 0,
                    cap: int = DEFAULT_CAP) -> Verdict:
    """Commutative monoid on the accumulator set plus the homomorphism law."""
    return _triple_verdict(AGGREGATE, triple, dom, "aggregate: monoid and homomorphism laws",
                           **_opts(grade, steps, max_size, budget, seed, cap))


def check_reduce(comb: Operator, dom, *, grade: int | None = None, steps: int = DEFAULT_STEPS,
                 max_size: int = DEFAULT_MAX_SIZE, budget: int = L.DEFAULT_BUDGET, seed: int = 0,
                 cap: int = DEFAULT_CAP) -> Verdict:
    """Commutative semigroup laws; no identity is needed."""
    return _comb_verdict(REDUCE, comb, dom, "reduce: commutative semigroup laws",
                         **_opts(grade, steps, max_size, budget, seed, cap))


def _delegated(combinator: str, base: str, verdict_fn, ops, dom, kw: dict) -> Verdict:
    # the same laws decide both; the counterexample is searched for the caller's combinator first
    label = f"{combinator}: delegated to {base} conditions"
    v = verdict_fn(combinator, ops, dom, label, **kw)
    if v.status != UNKNOWN or v.cause != "unreplayed-law":
        return v
    base_v = verdict_fn(base, ops, dom, label, **kw)
    if base_v.status == NON_DETERMINISTIC:
        warnings = v.warnings + (f"counterexample shown for {base}; no {combinator} execution exposes it",)
        return Verdict(NON_DETERMINISTIC, base_v.counterexample, v.law_reports, v.method, v.domain, label,
                       warnings, "law", v.evaluations)
    return v


def check_tree_aggregate(triple: OperatorTriple, dom, **kw) -> Verdict:
    kw = {**_opts(None, DEFAULT_STEPS, DEFAULT_MAX_SIZE, L.DEFAULT_BUDGET, 0, DEFAULT_CAP), **kw}
    return _delegated(TREE_AGGREGATE, AGGREGATE, _triple_verdict, triple, dom, kw)


def check_tree_reduce(comb: Operator, dom, **kw) -> Verdict:
    kw = {**_opts(None, DEFAULT_STEPS, DEFAULT_MAX_SIZE, L.DEFAULT_BUDGET, 0, DEFAULT_CAP), **kw}
    return _delegated(TREE_REDUCE, REDUCE, _comb_verdict, comb, dom, kw)


def check_aggregate_by_key(triple: OperatorTriple, dom, **kw) -> Verdict:
    kw = {**_opts(None, DEFAULT_STEPS, DEFAULT_MAX_SIZE, L.DEFAULT_BUDGET, 0, DEFAULT_CAP), **kw}
    return _delegated(AGGREGATE_BY_KEY, AGGREGATE, _triple_verdict, triple, dom, kw)


def check_reduce_by_key(merge: Operator, dom, **kw) -> Verdict:
    kw = {**_opts(None, DEFAULT_STEPS, DEFAULT_MAX_SIZE, L.DEFAULT_BUDGET, 0, DEFAULT_CAP), **kw}
    return _delegated(REDUCE_BY_KEY, REDUCE, _comb_verdict, merge, dom, kw)


def check_aggregate_messages(merge: Operator, dom, **kw) -> Verdict:
    """Sufficient condition only: a failing law leaves the answer open."""
    v = check_reduce_by_key(merge, dom, **kw)
    label = f"{AGGREGATE_MESSAGES}: sufficient condition via {REDUCE_BY_KEY}"
    if v.status == DETERMINISTIC:
        return Verdict(DETERMINISTIC, None, v.law_reports, v.method, v.domain, label, v.warnings, None,
                       v.evaluations)
    failed = v.failed_laws
    note = f"laws failing: {', '.join(failed)}" if failed else "law check inconclusive"
    return Verdict(UNKNOWN, None, v.law_reports, v.method, v.domain, label, v.warnings + (note,),
                   "sufficient-condition", v.evaluations, v.exhaustive)


CHECKS = {
    AGGREGATE: check_aggregate,
    REDUCE: check_reduce,
    TREE_AGGREGATE: check_tree_aggregate,
    TREE_REDUCE: check_tree_reduce,
    AGGREGATE_BY_KEY: check_aggregate_by_key,
    REDUCE_BY_KEY: check_reduce_by_key,
}


def check(combinator: str, ops, dom, **kw) -> Verdict:
    if combinator == AGGREGATE_MESSAGES:
        return check_aggregate_messages(ops, dom, **kw)
    try:
        fn = CHECKS[combinator]
    except KeyError:
        raise ValueError(f"unknown combinator {combinator!r}") from None
    return fn(ops, dom, **kw)
