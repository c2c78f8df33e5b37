"""Greedy counterexample minimization.

Elements are removed one at a time, then numeric values are replaced by zero
or halved, as long as the oracle still finds two differing executions. Both
passes repeat until nothing changes, so the result is deterministic.
"""

from __future__ import annotations

from typing import Any, Iterator

from ..core import DEFAULT_CAP
from ..values import Pair, Some
from .oracle import oracle
from .runner import min_length
from .verdict import Counterexample

MAX_ROUNDS = 64


def _halve(v) -> Iterator[Any]:
    if type(v) is bool:
        return
    if type(v) is int:
        if v != 0:
            yield 0
            yield int(v / 2)
    elif type(v) is float:
        if v != 0.0 and v == v and abs(v) != float("inf"):
            yield 0.0
            # stay on integers so a minimized input remains readable
            if v != int(v):
                yield float(int(v))
            elif (v / 2).is_integer():
                yield v / 2
    elif type(v) is Pair:
        for h in _halve(v.value):
            yield Pair(v.key, h)
    elif type(v) is Some:
        for h in _halve(v.value):
            yield Some(h)
    elif type(v) is tuple:
        if v:
            yield v[:-1]


def _still_fails(combinator: str, ops, xs: tuple, cap: int) -> Counterexample | None:
    if len(xs) < min_length(combinator) or len(xs) > cap:
        return None
    return oracle(combinator, ops, xs, cap=cap).counterexample


def shrink(cx: Counterexample, ops, *, cap: int = DEFAULT_CAP) -> Counterexample:
    """A counterexample on a list no longer than ``cx.input`` that still replays."""
    best = cx
    xs = tuple(cx.input)
    if len(xs) > cap:
        return cx
    for _ in range(MAX_ROUNDS):
        changed = False
        i = 0
        while i < len(xs):
            cand = xs[:i] + xs[i + 1:]
            found = _still_fails(cx.combinator, ops, cand, cap)
            if found is not None:
                xs, best, changed = cand, found, True
            else:
                i += 1
        for i in range(len(xs)):
            for h in _halve(xs[i]):
                cand = xs[:i] + (h,) + xs[i + 1:]
                found = _still_fails(cx.combinator, ops, cand, cap)
                if found is not None:
                    xs, best, changed = cand, found, True
                    break
        if not changed:
            break
    return best
