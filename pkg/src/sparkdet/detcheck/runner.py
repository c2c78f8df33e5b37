"""Uniform way to run any combinator on a list under one concrete execution."""

from __future__ import annotations

from typing import Any, Sequence

from .. import combinators as C
from ..opdsl import OperatorTriple
from ..values import Pair, order_key
from .verdict import Execution, Failure, attempt

AGGREGATE = "aggregate"
REDUCE = "reduce"
TREE_AGGREGATE = "treeAggregate"
TREE_REDUCE = "treeReduce"
AGGREGATE_BY_KEY = "aggregateByKey"
REDUCE_BY_KEY = "reduceByKey"
AGGREGATE_MESSAGES = "aggregateMessages"

COMBINATORS = (AGGREGATE, REDUCE, TREE_AGGREGATE, TREE_REDUCE, AGGREGATE_BY_KEY, REDUCE_BY_KEY)
TRIPLE_COMBINATORS = (AGGREGATE, TREE_AGGREGATE, AGGREGATE_BY_KEY)
TREE_COMBINATORS = (TREE_AGGREGATE, TREE_REDUCE)
BY_KEY_COMBINATORS = (AGGREGATE_BY_KEY, REDUCE_BY_KEY)


def needs_triple(combinator: str) -> bool:
    return combinator in TRIPLE_COMBINATORS


def allows_empty_blocks(combinator: str) -> bool:
    # only the aggregate family tolerates an empty partition; by-key drops them anyway
    return combinator in (AGGREGATE, TREE_AGGREGATE)


def min_length(combinator: str) -> int:
    return 1 if combinator in (REDUCE, TREE_REDUCE) else 0


def validate_ops(combinator: str, ops: Any) -> None:
    if combinator not in COMBINATORS:
        raise ValueError(f"unknown combinator {combinator!r}")
    if needs_triple(combinator) != isinstance(ops, OperatorTriple):
        want = "an OperatorTriple" if needs_triple(combinator) else "a single comb operator"
        raise TypeError(f"{combinator} needs {want}")


def normalize_by_key(prdd) -> tuple:
    """Per-key result as a key-sorted tuple of pairs, independent of partitioning."""
    pairs = [p for part in prdd for p in part]
    return tuple(sorted(pairs, key=lambda p: order_key(p.key)))


def reference(combinator: str, ops: Any, xs: Sequence) -> Any:
    """The sequential specification every execution must agree with."""
    if combinator in (AGGREGATE, TREE_AGGREGATE):
        return C.foldl_ref(ops.seq, ops.zero, xs)
    if combinator in (REDUCE, TREE_REDUCE):
        return C.reducel_ref(ops, xs)
    if combinator == AGGREGATE_BY_KEY:
        return tuple(sorted(
            (Pair(k, C.foldl_ref(ops.seq, ops.zero, C.filterkey(k, xs))) for k in C.keys_of(xs)),
            key=lambda p: order_key(p.key),
        ))
    if combinator == REDUCE_BY_KEY:
        return tuple(sorted(
            (Pair(k, C.reducel_ref(ops, C.filterkey(k, xs))) for k in C.keys_of(xs)),
            key=lambda p: order_key(p.key),
        ))
    raise ValueError(f"unknown combinator {combinator!r}")


def run_rdd(combinator: str, ops: Any, rdd, plan: Sequence[int] | None = None) -> Any:
    if combinator == AGGREGATE:
        return C.aggregate_dt(ops, rdd)
    if combinator == REDUCE:
        return C.reduce_dt(ops, rdd)
    if combinator == TREE_AGGREGATE:
        return C.tree_aggregate_bt(plan, ops, rdd)
    if combinator == TREE_REDUCE:
        return C.tree_reduce_bt(plan, ops, rdd)
    if combinator == AGGREGATE_BY_KEY:
        return normalize_by_key(C.aggregate_by_key_dt(ops, rdd))
    if combinator == REDUCE_BY_KEY:
        return normalize_by_key(C.reduce_by_key_dt(ops, rdd))
    raise ValueError(f"unknown combinator {combinator!r}")


def run(combinator: str, ops: Any, xs: Sequence, execution: Execution) -> Any:
    """Outcome of one execution; errors become :class:`Failure` values."""
    if execution.is_reference:
        return attempt(reference, combinator, ops, xs)
    try:
        rdd = execution.partitioning.apply(xs)
    except ValueError as e:
        return Failure("InvalidPartitioning", str(e))
    return attempt(run_rdd, combinator, ops, rdd, execution.plan)


def replay(cx, ops: Any) -> tuple[Any, Any]:
    """Re-evaluate both executions of a counterexample."""
    return run(cx.combinator, ops, cx.input, cx.a), run(cx.combinator, ops, cx.input, cx.b)


def as_pairs(xs: Sequence, key: Any = "k") -> tuple:
    return tuple(x if type(x) is Pair else Pair(key, x) for x in xs)

