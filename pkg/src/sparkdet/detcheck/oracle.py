"""Brute-force ground truth: run every partitioning (and plan) and compare.

The per-list oracle checks one input list. :func:`sweep` checks every list
up to a length over a finite domain; it walks multisets instead of lists,
since all orderings of a multiset share the same set of partitionings, so the
lists of one multiset are all deterministic exactly when their reference
results and all partitioning outputs collapse to a single value.
"""

from __future__ import annotations

import itertools
from typing import Any, Iterable, Sequence

from ..chaos import ChaosSource
from ..core import (
    DEFAULT_CAP,
    Partitioning,
    all_reduction_orders,
    compositions,
    distinct_permutations,
    draw_partitioning,
    random_plan,
    with_one_empty_block,
)
from ..errors import EmptyList
from ..values import Pair, canon, render
from .runner import (
    AGGREGATE,
    AGGREGATE_BY_KEY,
    BY_KEY_COMBINATORS,
    REDUCE,
    REDUCE_BY_KEY,
    TREE_AGGREGATE,
    TREE_COMBINATORS,
    TREE_REDUCE,
    allows_empty_blocks,
    as_pairs,
    min_length,
    normalize_by_key,
    reference,
    run,
    validate_ops,
)
from .verdict import (
    DETERMINISTIC,
    NON_DETERMINISTIC,
    UNKNOWN,
    Counterexample,
    Execution,
    Failure,
    Verdict,
    attempt,
    outcome_key,
    same_outcome,
)

DEFAULT_SAMPLES = 2000


class _Engine:
    """Evaluates partitionings fast by memoizing block results and combinations."""

    def __init__(self, combinator: str, ops: Any):
        self.combinator = combinator
        self.ops = ops
        self.tree = combinator in TREE_COMBINATORS
        self.by_key = combinator in BY_KEY_COMBINATORS
        self.blocks: dict = {}
        self.block_values: list = []
        self.value_ids: dict = {}
        self.combined: dict = {}
        self.evaluations = 0

    def block(self, key: tuple, items: Sequence) -> int:
        """Id of the memoized result of one partition."""
        try:
            return self.blocks[key]
        except KeyError:
            pass
        self.evaluations += max(1, len(items))
        c, ops = self.combinator, self.ops
        if c in (AGGREGATE, TREE_AGGREGATE):
            r = attempt(_foldl, ops.seq, ops.zero, items)
        elif c in (REDUCE, TREE_REDUCE):
            r = attempt(_reducel, ops, items)
        elif c == AGGREGATE_BY_KEY:
            r = attempt(_pre_agg, lambda prev, v: ops.seq(ops.zero if prev is None else prev, v), items)
        else:
            r = attempt(_pre_agg, lambda prev, v: v if prev is None else ops(prev, v), items)
        # equal partition results share an id, so combinations are memoized by value
        k = outcome_key(r)
        vid = self.value_ids.get(k)
        if vid is None:
            vid = self.value_ids[k] = len(self.block_values)
            self.block_values.append(r)
        self.blocks[key] = vid
        return vid

    def combine(self, ids: tuple) -> list:
        """``(outcome_key, outcome)`` for every outcome reachable from these partition results."""
        try:
            return self.combined[ids]
        except KeyError:
            pass
        results = [self.block_values[i] for i in ids]
        for r in results:
            if type(r) is Failure:
                self.combined[ids] = [(outcome_key(r), r)]
                return self.combined[ids]
        self.evaluations += max(1, len(results))
        c, ops = self.combinator, self.ops
        if c == AGGREGATE:
            out = [attempt(_foldl, ops.comb, ops.zero, results)]
        elif c == REDUCE:
            out = [attempt(_reducel, ops, results)]
        elif self.tree and not results:
            out = [Failure("EmptyRdd", "no sub-results to combine")]
        elif self.tree:
            comb = ops.comb if c == TREE_AGGREGATE else ops
            out = _bracketings(comb, results)
            self.evaluations += len(out)
        elif c == AGGREGATE_BY_KEY:
            merge = lambda prev, v: ops.comb(ops.zero if prev is None else prev, v)  # noqa: E731
            out = [attempt(_cross_by_key, merge, results)]
        else:
            merge = lambda prev, v: v if prev is None else ops(prev, v)  # noqa: E731
            out = [attempt(_cross_by_key, merge, results)]
        self.combined[ids] = [(outcome_key(o), o) for o in out]
        return self.combined[ids]


def _foldl(op, z, xs):
    acc = z
    for x in xs:
        acc = op(acc, x)
    return acc


def _reducel(op, xs):
    if not xs:
        raise EmptyList("reducel of an empty list")
    return _foldl(op, xs[0], xs[1:])


def _pre_agg(merge, items) -> tuple:
    acc: dict = {}
    for p in items:
        ck = canon(p.key)
        prev = acc.get(ck)
        acc[ck] = (p.key, merge(None if prev is None else prev[1], p.value))
    return tuple(Pair(k, v) for k, v in acc.values())


def _cross_by_key(merge, results) -> tuple:
    out: dict = {}
    for part in results:
        for p in part:
            ck = canon(p.key)
            prev = out.get(ck)
            out[ck] = (p.key, merge(None if prev is None else prev[1], p.value))
    return normalize_by_key(((Pair(k, v) for k, v in out.values()),))


def _bracketings(comb, results: list) -> list:
    """Every value some binary bracketing of ``results`` can produce."""
    m = len(results)
    table: dict = {}
    for i, r in enumerate(results):
        table[i, i] = {outcome_key(r): r}
    for width in range(1, m):
        for i in range(m - width):
            j = i + width
            cell: dict = {}
            for k in range(i, j):
                for a in table[i, k].values():
                    for b in table[k + 1, j].values():
                        if type(a) is Failure:
                            v = a
                        elif type(b) is Failure:
                            v = b
                        else:
                            v = attempt(comb, a, b)
                        cell.setdefault(outcome_key(v), v)
            table[i, j] = cell
    return list(table[0, m - 1].values())


def _layouts(n: int, allow_empty: bool, tree: bool = False) -> list[tuple[int, ...]]:
    comps = list(compositions(n))
    if allow_empty:
        comps += [s for c in comps for s in with_one_empty_block(c)]
    if tree:
        # the tree combinators reject an Rdd without partitions
        comps = [c for c in comps if c]
    return comps


def _prepare(combinator: str, ops: Any, xs: Iterable) -> tuple:
    validate_ops(combinator, ops)
    xs = tuple(xs)
    if combinator in BY_KEY_COMBINATORS:
        xs = as_pairs(xs)
    if len(xs) < min_length(combinator):
        raise EmptyList(f"{combinator} needs a non-empty input list")
    return xs


def _outputs(engine: _Engine, xs: Sequence, keys: Sequence, perm: Sequence[int], sizes: Sequence[int]):
    ids, at = [], 0
    for s in sizes:
        idx = perm[at:at + s]
        ids.append(engine.block(tuple(keys[i] for i in idx), [xs[i] for i in idx]))
        at += s
    return engine.combine(tuple(ids))


def _find_plan(combinator: str, ops: Any, xs: Sequence, part: Partitioning, ref: Any) -> tuple[int, ...] | None:
    blocks = len(part.sizes)
    for plan in all_reduction_orders(blocks, cap=max(blocks, 1)):
        if not same_outcome(run(combinator, ops, xs, Execution(part, plan)), ref):
            return plan
    return None


def _counterexample(combinator: str, ops: Any, xs: Sequence, part: Partitioning, ref: Any) -> Counterexample | None:
    plan = _find_plan(combinator, ops, xs, part, ref) if combinator in TREE_COMBINATORS else None
    a, b = Execution(), Execution(part, plan)
    out_a, out_b = run(combinator, ops, xs, a), run(combinator, ops, xs, b)
    if same_outcome(out_a, out_b):
        return None
    return Counterexample(combinator, tuple(xs), a, b, out_a, out_b)


def _describe_list(xs: Sequence) -> str:
    return render(tuple(xs))


def oracle(
    combinator: str,
    ops: Any,
    xs: Iterable,
    *,
    cap: int = DEFAULT_CAP,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    allow_empty: bool | None = None,
) -> Verdict:
    """Compare every execution of ``combinator`` on ``xs`` with the sequential reference.

    Beyond ``cap`` elements the enumeration gives way to ``samples`` seeded
    random executions, and the verdict can then only be nonDeterministic or
    unknown.
    """
    xs = _prepare(combinator, ops, xs)
    if allow_empty is None:
        allow_empty = allows_empty_blocks(combinator)
    ref = attempt(reference, combinator, ops, xs)
    label = f"oracle {combinator}"
    if len(xs) > cap:
        return _sampled(combinator, ops, xs, ref, samples, seed, allow_empty, label)
    engine = _Engine(combinator, ops)
    keys = [canon(x) for x in xs]
    layouts = _layouts(len(xs), allow_empty, combinator in TREE_COMBINATORS)
    ref_key = outcome_key(ref)
    for perm in distinct_permutations(xs):
        for sizes in layouts:
            for okey, _ in _outputs(engine, xs, keys, perm, sizes):
                if okey != ref_key:
                    cx = _counterexample(combinator, ops, xs, Partitioning(tuple(perm), tuple(sizes)), ref)
                    if cx is None:
                        raise AssertionError("fast evaluation disagrees with the combinator implementation")
                    return Verdict(NON_DETERMINISTIC, cx, method="oracle", domain=_describe_list(xs), label=label,
                                   cause=_cause(cx), evaluations=engine.evaluations)
    return Verdict(DETERMINISTIC, method="oracle", domain=_describe_list(xs), label=label,
                   evaluations=engine.evaluations)


def _cause(cx: Counterexample) -> str:
    return "operator-error" if type(cx.out_a) is Failure or type(cx.out_b) is Failure else "oracle"


def _sampled(combinator, ops, xs, ref, samples, seed, allow_empty, label) -> Verdict:
    chaos = ChaosSource(seed)
    n = len(xs)
    for _ in range(samples):
        part = draw_partitioning(chaos, n)
        sizes = part.sizes
        if allow_empty and chaos.randbelow(4) == 0:
            pos = chaos.randbelow(len(sizes) + 1)
            sizes = sizes[:pos] + (0,) + sizes[pos:]
        part = Partitioning(part.perm, sizes)
        plan = random_plan(chaos, len(sizes)) if combinator in TREE_COMBINATORS else None
        out = run(combinator, ops, xs, Execution(part, plan))
        if not same_outcome(out, ref):
            cx = Counterexample(combinator, tuple(xs), Execution(), Execution(part, plan), ref, out)
            return Verdict(NON_DETERMINISTIC, cx, method="oracle", domain=_describe_list(xs), label=label,
                           cause=_cause(cx), evaluations=samples, exhaustive=False)
    return Verdict(UNKNOWN, method="oracle", domain=_describe_list(xs), label=label, evaluations=samples,
                   exhaustive=False, warnings=(f"input longer than cap; {samples} sampled executions agreed",))


def oracle_aggregate(triple, xs, **kw) -> Verdict:
    return oracle(AGGREGATE, triple, xs, **kw)


def oracle_tree(triple, xs, **kw) -> Verdict:
    return oracle(TREE_AGGREGATE, triple, xs, **kw)


def oracle_reduce(comb, xs, **kw) -> Verdict:
    return oracle(REDUCE, comb, xs, **kw)


def oracle_tree_reduce(comb, xs, **kw) -> Verdict:
    return oracle(TREE_REDUCE, comb, xs, **kw)


def oracle_by_key(ops, pairs, **kw) -> Verdict:
    from ..opdsl import OperatorTriple

    return oracle(AGGREGATE_BY_KEY if isinstance(ops, OperatorTriple) else REDUCE_BY_KEY, ops, pairs, **kw)


# domain sweep ------------------------------------------------------------


def sweep(
    combinator: str,
    ops: Any,
    values: Sequence,
    max_len: int,
    *,
    keys: Sequence | None = None,
    domain_name: str = "",
) -> Verdict:
    """Oracle over every list of length <= ``max_len`` drawn from ``values``.

    For the by-key combinators the lists are drawn from ``keys x values``.
    """
    validate_ops(combinator, ops)
    if combinator in BY_KEY_COMBINATORS:
        universe = [Pair(k, v) for k in (keys or ("a", "b")) for v in values]
    else:
        universe = list(values)
    allow_empty = allows_empty_blocks(combinator)
    engine = _Engine(combinator, ops)
    label = f"oracle sweep {combinator}"
    name = domain_name or f"all lists of length <= {max_len} over {len(universe)} values"
    for length in range(min_length(combinator), max_len + 1):
        layouts = _layouts(length, allow_empty, combinator in TREE_COMBINATORS)
        for combo in itertools.combinations_with_replacement(range(len(universe)), length):
            xs = tuple(universe[i] for i in combo)
            keys_ = [canon(x) for x in xs]
            seen: set = set()
            for perm in distinct_permutations(xs):
                seen.add(outcome_key(attempt(reference, combinator, ops, [xs[i] for i in perm])))
                engine.evaluations += length
                for sizes in layouts:
                    for okey, _ in _outputs(engine, xs, keys_, perm, sizes):
                        seen.add(okey)
                if len(seen) > 1:
                    cx = _multiset_counterexample(combinator, ops, xs)
                    return Verdict(NON_DETERMINISTIC, cx, method="oracle", domain=name, label=label,
                                   cause=_cause(cx), evaluations=engine.evaluations)
    return Verdict(DETERMINISTIC, method="oracle", domain=name, label=label, evaluations=engine.evaluations)


def _multiset_counterexample(combinator: str, ops: Any, xs: tuple) -> Counterexample:
    for perm in distinct_permutations(xs):
        v = oracle(combinator, ops, [xs[i] for i in perm], cap=max(len(xs), DEFAULT_CAP))
        if v.counterexample is not None:
            return v.counterexample
    raise AssertionError("sweep saw two outcomes but no ordering of the multiset is non-deterministic")


# targeted search from law witnesses ---------------------------------------


def search_segments(combinator: str, ops: Any, segments: Sequence[Sequence]) -> Counterexample | None:
    """Try executions that treat each segment as an atom: reorder, group, pad."""
    validate_ops(combinator, ops)
    segments = [tuple(s) for s in segments]
    xs = tuple(x for s in segments for x in s)
    if combinator in BY_KEY_COMBINATORS:
        xs = as_pairs(xs)
    if len(xs) < min_length(combinator):
        return None
    ref = attempt(reference, combinator, ops, xs)
    starts = list(itertools.accumulate([0] + [len(s) for s in segments]))
    allow_empty = allows_empty_blocks(combinator)
    k = len(segments)
    for order in itertools.permutations(range(k)):
        perm = tuple(i for s in order for i in range(starts[s], starts[s + 1]))
        seg_sizes = [len(segments[s]) for s in order]
        for grouping in compositions(k):
            sizes, at = [], 0
            for g in grouping:
                sizes.append(sum(seg_sizes[at:at + g]))
                at += g
            variants = [tuple(sizes)]
            if allow_empty:
                variants += list(with_one_empty_block(tuple(sizes)))
            for sz in variants:
                if not allow_empty and 0 in sz:
                    continue
                if not sz:
                    continue
                part = Partitioning(perm, sz)
                plans = all_reduction_orders(len(sz), cap=len(sz)) if combinator in TREE_COMBINATORS else [None]
                for plan in plans:
                    out = run(combinator, ops, xs, Execution(part, plan))
                    if not same_outcome(out, ref):
                        return Counterexample(combinator, xs, Execution(), Execution(part, plan), ref, out)
    return None


def counterexample_from_candidates(
    combinator: str, ops: Any, candidates: Sequence[Sequence[Sequence]], cap: int = DEFAULT_CAP
) -> Counterexample | None:
    for segments in candidates:
        cx = search_segments(combinator, ops, segments)
        if cx is not None:
            return cx
    for segments in candidates:
        xs = [x for s in segments for x in s]
        if min_length(combinator) <= len(xs) <= cap:
            v = oracle(combinator, ops, xs, cap=cap)
            if v.counterexample is not None:
                return v.counterexample
    return None
