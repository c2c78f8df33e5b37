"""Aggregation combinators over Rdds.

Each combinator comes in a chaotic flavor, which draws its choices from a
:class:`ChaosSource`, and a deterministic flavor (``*_dt`` / ``*_bt``) that
takes the concrete choice as data. The chaotic flavor is always the
deterministic one applied to what the source drew, which is what makes runs
replayable.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .chaos import ChaosSource
from .core import Rdd, permutation, random_plan, repartition
from .errors import EmptyList, EmptyPartition, EmptyRdd, InvalidPlan, LocatedError
from .opdsl import OperatorTriple
from .values import Pair, Some, Value, canon

BinOp = Callable[[Value, Value], Value]


def foldl_ref(op: BinOp, z: Value, xs: Iterable[Value]) -> Value:
    acc = z
    for x in xs:
        acc = op(acc, x)
    return acc


def reducel_ref(op: BinOp, xs: Sequence[Value]) -> Value:
    if len(xs) == 0:
        raise EmptyList("reducel of an empty list")
    return foldl_ref(op, xs[0], xs[1:])


def _fold_partition(op: BinOp, z: Value, part: Sequence[Value], index: int) -> Value:
    acc = z
    for j, x in enumerate(part):
        try:
            acc = op(acc, x)
        except LocatedError as e:
            raise e.locate(index, j)
    return acc


def _reduce_partition(op: BinOp, part: Sequence[Value], index: int) -> Value:
    if len(part) == 0:
        raise EmptyPartition(f"partition {index} is empty")
    acc = part[0]
    for j in range(1, len(part)):
        try:
            acc = op(acc, part[j])
        except LocatedError as e:
            raise e.locate(index, j)
    return acc


def _cross(op: BinOp, z: Value, results: Sequence[Value], order: Sequence[int]) -> Value:
    acc = z
    for i in order:
        try:
            acc = op(acc, results[i])
        except LocatedError as e:
            raise e.locate(i)
    return acc


def _ordered(rdd: Rdd, order: Sequence[int] | None) -> list[int]:
    return list(range(len(rdd))) if order is None else list(order)


# aggregate / reduce ------------------------------------------------------


def aggregate_dt(triple: OperatorTriple, rdd: Rdd, order: Sequence[int] | None = None) -> Value:
    """Fold every partition with seq from zero, then fold the sub-results with comb.

    ``order`` is the sequence in which sub-results reach the combining fold;
    by default partition order.
    """
    pres = [_fold_partition(triple.seq, triple.zero, part, i) for i, part in enumerate(rdd)]
    return _cross(triple.comb, triple.zero, pres, _ordered(rdd, order))


def aggregate(chaos: ChaosSource, triple: OperatorTriple, rdd: Rdd) -> Value:
    return aggregate_dt(triple, rdd, permutation(chaos, len(rdd)))


def reduce_dt(comb: BinOp, rdd: Rdd, order: Sequence[int] | None = None) -> Value:
    if len(rdd) == 0:
        raise EmptyRdd("reduce needs at least one partition")
    pres = [_reduce_partition(comb, part, i) for i, part in enumerate(rdd)]
    order = _ordered(rdd, order)
    return _cross(comb, pres[order[0]], pres, order[1:])


def reduce(chaos: ChaosSource, comb: BinOp, rdd: Rdd) -> Value:
    return reduce_dt(comb, rdd, permutation(chaos, len(rdd)))


# tree variants -----------------------------------------------------------


def apply_plan(comb: BinOp, subresults: Sequence[Value], plan: Sequence[int]) -> Value:
    """Merge the adjacent pair at each planned index until one value is left."""
    rs = list(subresults)
    if not rs:
        raise InvalidPlan("cannot combine an empty list of sub-results")
    if len(plan) != len(rs) - 1:
        raise InvalidPlan(f"plan of length {len(plan)} does not fit {len(rs)} sub-results")
    for step, i in enumerate(plan):
        if not 0 <= i < len(rs) - 1:
            raise InvalidPlan(f"step {step}: index {i} out of range for {len(rs)} sub-results")
        rs[i:i + 2] = [comb(rs[i], rs[i + 1])]
    return rs[0]


def tree_aggregate_bt(plan: Sequence[int], triple: OperatorTriple, rdd: Rdd, order: Sequence[int] | None = None) -> Value:
    if len(rdd) == 0:
        raise EmptyRdd("treeAggregate needs at least one partition")
    pres = [_fold_partition(triple.seq, triple.zero, part, i) for i, part in enumerate(rdd)]
    return apply_plan(triple.comb, [pres[i] for i in _ordered(rdd, order)], plan)


def tree_aggregate(chaos: ChaosSource, triple: OperatorTriple, rdd: Rdd) -> Value:
    if len(rdd) == 0:
        raise EmptyRdd("treeAggregate needs at least one partition")
    order = permutation(chaos, len(rdd))
    return tree_aggregate_bt(random_plan(chaos, len(rdd)), triple, rdd, order)


def tree_reduce_bt(plan: Sequence[int], comb: BinOp, rdd: Rdd, order: Sequence[int] | None = None) -> Value:
    if len(rdd) == 0:
        raise EmptyRdd("treeReduce needs at least one partition")
    pres = [_reduce_partition(comb, part, i) for i, part in enumerate(rdd)]
    return apply_plan(comb, [pres[i] for i in _ordered(rdd, order)], plan)


def tree_reduce(chaos: ChaosSource, comb: BinOp, rdd: Rdd) -> Value:
    if len(rdd) == 0:
        raise EmptyRdd("treeReduce needs at least one partition")
    order = permutation(chaos, len(rdd))
    return tree_reduce_bt(random_plan(chaos, len(rdd)), comb, rdd, order)


# pair helpers ------------------------------------------------------------


def _pair(p) -> Pair:
    return p if type(p) is Pair else Pair(*p)


def has_key(k: Value, ps: Sequence[Pair]) -> bool:
    return lookup(k, ps) is not None


def has_value(k: Value, default: Value, ps: Sequence[Pair]) -> Value:
    found = lookup(k, ps)
    return default if found is None else found.value


def add_to(key: Value, val: Value, ps: Sequence[Pair]) -> list[Pair]:
    """Literal list version: new pair in front, other keys kept, older pair for key dropped."""
    ck = canon(key)
    out = [Pair(key, val)]
    for p in ps:
        if canon(p.key) != ck:
            out.insert(0, p)
    return out


def lookup(k: Value, pairs) -> Some | None:
    """Value of the first pair with key ``k``; accepts a pair list or a pair Rdd."""
    ck = canon(k)
    for p in _iter_pairs(pairs):
        if canon(p.key) == ck:
            return Some(p.value)
    return None


def _iter_pairs(pairs):
    for item in pairs:
        if type(item) is tuple and (len(item) != 2 or type(item[0]) in (tuple, Pair)):
            # a partition of an Rdd
            yield from (_pair(p) for p in item)
        else:
            yield _pair(item)


def filterkey(k: Value, xs: Sequence) -> list[Value]:
    ck = canon(k)
    return [p.value for p in map(_pair, xs) if canon(p.key) == ck]


def keys_of(pairs: Iterable) -> list[Value]:
    seen, out = set(), []
    for p in map(_pair, pairs):
        ck = canon(p.key)
        if ck not in seen:
            seen.add(ck)
            out.append(p.key)
    return out


# by-key ------------------------------------------------------------------


def _pre_aggregate(merge: Callable[[Value | None, Value], Value], part: Sequence, index: int) -> list[Pair]:
    acc: dict = {}
    for j, item in enumerate(part):
        p = _pair(item)
        ck = canon(p.key)
        prev = acc.get(ck)
        try:
            acc[ck] = (p.key, merge(None if prev is None else prev[1], p.value))
        except LocatedError as e:
            raise e.locate(index, j)
    return [Pair(k, v) for k, v in acc.values()]


def _by_key(seed_merge, cross_merge, prdd: Rdd, order: Sequence[int] | None) -> list[Pair]:
    pre = [_pre_aggregate(seed_merge, part, i) for i, part in enumerate(prdd)]
    out: dict = {}
    for i in _ordered(prdd, order):
        for p in pre[i]:
            ck = canon(p.key)
            prev = out.get(ck)
            try:
                out[ck] = (p.key, cross_merge(None if prev is None else prev[1], p.value))
            except LocatedError as e:
                raise e.locate(i)
    return [Pair(k, v) for k, v in out.values()]


def _agg_merges(triple: OperatorTriple):
    z, seq, comb = triple.zero, triple.seq, triple.comb
    return (lambda prev, v: seq(z if prev is None else prev, v),
            lambda prev, v: comb(z if prev is None else prev, v))


def _red_merge(comb: BinOp):
    return lambda prev, v: v if prev is None else comb(prev, v)


def aggregate_by_key_dt(triple: OperatorTriple, prdd: Rdd, order: Sequence[int] | None = None) -> Rdd:
    """Per-key aggregate; one output partition in first-occurrence key order."""
    seed_merge, cross_merge = _agg_merges(triple)
    out = _by_key(seed_merge, cross_merge, prdd, order)
    return (tuple(out),) if out else ()


def aggregate_by_key(chaos: ChaosSource, triple: OperatorTriple, prdd: Rdd) -> Rdd:
    seed_merge, cross_merge = _agg_merges(triple)
    out = _by_key(seed_merge, cross_merge, prdd, permutation(chaos, len(prdd)))
    return repartition(chaos, out)


def reduce_by_key_dt(comb: BinOp, prdd: Rdd, order: Sequence[int] | None = None) -> Rdd:
    merge = _red_merge(comb)
    out = _by_key(merge, merge, prdd, order)
    return (tuple(out),) if out else ()


def reduce_by_key(chaos: ChaosSource, comb: BinOp, prdd: Rdd) -> Rdd:
    merge = _red_merge(comb)
    out = _by_key(merge, merge, prdd, permutation(chaos, len(prdd)))
    return repartition(chaos, out)


def as_dict(prdd: Rdd) -> dict:
    """Key canon -> value view of a pair Rdd whose keys are unique."""
    return {canon(p.key): p.value for part in prdd for p in map(_pair, part)}


def to_mapping(prdd: Rdd) -> dict:
    """Plain ``{key: value}`` dict, for hashable keys such as vertex ids."""
    return {p.key: p.value for part in prdd for p in map(_pair, part)}
