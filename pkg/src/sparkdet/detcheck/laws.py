"""Algebraic law checks over finite approximations of the accumulator image.

Two scopes are supported. Without a grade, laws are checked on every element
of a bounded closure. With ``grade=n``, every element carries the length of
the shortest input list that produces it, and a law instance is only checked
when the lists behind its elements fit in ``n`` elements together. The graded
scope covers exactly the inputs an oracle over lists of length ``n`` can
observe, which is what lets the two methods be compared instance for instance.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from ..chaos import ChaosSource
from ..values import Value, canon
from .verdict import HOLDS, LAW_UNKNOWN, VIOLATED, Failure, LawReport, attempt, same_outcome

DEFAULT_BUDGET = 10**6


@dataclass
class Closure:
    """Elements reachable by folding lists over a domain, in order of depth."""

    elems: list = field(default_factory=list)
    depths: list = field(default_factory=list)
    lists: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    saturated: bool = False
    truncated: bool = False
    failures: int = 0
    # set when folding a non-empty list lands back on the depth-0 zero
    zero_refolded: bool = False

    def add(self, v: Value, depth: int, witness: tuple) -> bool:
        k = canon(v)
        if k in self.index:
            return False
        self.index[k] = len(self.elems)
        self.elems.append(v)
        self.depths.append(depth)
        self.lists.append(witness)
        return True

    def list_for(self, v: Value) -> tuple | None:
        i = self.index.get(canon(v))
        return None if i is None else self.lists[i]

    def depth_of(self, v: Value) -> int | None:
        i = self.index.get(canon(v))
        return None if i is None else self.depths[i]

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, v: Value) -> bool:
        return canon(v) in self.index


def _grow(closure: Closure, step: Callable, values: Sequence, frontier: list[int], start_depth: int,
          max_depth: int | None, max_size: int | None) -> Closure:
    depth = start_depth
    while frontier:
        if max_depth is not None and depth >= max_depth:
            return closure
        depth += 1
        nxt = []
        for i in frontier:
            e, lst = closure.elems[i], closure.lists[i]
            for x in values:
                r = attempt(step, e, x)
                if type(r) is Failure:
                    closure.failures += 1
                    continue
                if not closure.add(r, depth, lst + (x,)):
                    if closure.depths and closure.depths[0] == 0 and closure.index[canon(r)] == 0:
                        closure.zero_refolded = True
                    continue
                nxt.append(len(closure.elems) - 1)
                if max_size is not None and len(closure) >= max_size:
                    closure.truncated = True
                    return closure
        frontier = nxt
    closure.saturated = True
    return closure


def seq_closure(seq: Callable, zero: Value, values: Sequence, max_depth: int | None = None,
                max_size: int | None = None) -> Closure:
    """Approximation of the image of ``foldl(seq, zero)`` over lists from ``values``."""
    c = Closure()
    c.add(zero, 0, ())
    return _grow(c, seq, values, [0], 0, max_depth, max_size)


def reduce_closure(comb: Callable, values: Sequence, max_depth: int | None = None,
                   max_size: int | None = None) -> Closure:
    """Approximation of the image of ``reducel(comb)`` over non-empty lists from ``values``."""
    c = Closure()
    frontier = []
    for x in values:
        if c.add(x, 1, (x,)):
            frontier.append(len(c) - 1)
    return _grow(c, comb, values, frontier, 1, max_depth, max_size)


# enumeration of law instances -------------------------------------------


@dataclass(frozen=True)
class Scope:
    """Which elements a law may combine: everything, or by total depth."""

    closure: Closure
    grade: int | None = None
    # how many law slots the bare depth-0 zero may fill; None means any number
    zero_slots: int | None = None

    def fits(self, idx: tuple) -> bool:
        return self.zero_slots is None or idx.count(0) <= self.zero_slots

    def element(self, i: int) -> bool:
        """Whether element i may stand for an arbitrary accumulator in the identity law."""
        return self.zero_slots is None or i != 0

    def limit(self, used: int) -> int:
        """Number of leading elements whose depth fits in what is left of the grade."""
        if self.grade is None:
            return len(self.closure)
        return bisect_right(self.closure.depths, self.grade - used)

    def depth(self, i: int) -> int:
        return self.closure.depths[i] if self.grade is not None else 0


def _singles(scope: Scope, reserve: int = 0) -> Iterator[tuple[int]]:
    for i in range(scope.limit(reserve)):
        if scope.element(i):
            yield (i,)


def _pairs(scope: Scope, unordered: bool) -> Iterator[tuple[int, int]]:
    for i in range(scope.limit(0)):
        lim = scope.limit(scope.depth(i))
        for j in range(i + 1 if unordered else 0, lim):
            if scope.fits((i, j)):
                yield (i, j)


def _triples(scope: Scope) -> Iterator[tuple[int, int, int]]:
    for i in range(scope.limit(0)):
        di = scope.depth(i)
        for j in range(scope.limit(di)):
            dj = di + scope.depth(j)
            for k in range(scope.limit(dj)):
                if scope.fits((i, j, k)):
                    yield (i, j, k)


def _count(it_factory: Callable[[], Iterator], budget: int) -> int:
    n = 0
    for _ in it_factory():
        n += 1
        if n > budget:
            break
    return n


def _sample(scope: Scope, arity: int, budget: int, seed: int, unordered: bool = False,
            singles: bool = False) -> Iterator[tuple]:
    chaos = ChaosSource(seed)
    size = scope.limit(0)
    if size == 0:
        return
    produced, attempts = 0, 0
    while produced < budget and attempts < budget * 20:
        attempts += 1
        idx = tuple(chaos.randbelow(size) for _ in range(arity))
        if unordered and arity == 2 and idx[0] >= idx[1]:
            continue
        if scope.grade is not None and sum(scope.depth(i) for i in idx) > scope.grade:
            continue
        if not (scope.element(idx[0]) if singles else scope.fits(idx)):
            continue
        produced += 1
        yield idx


def _run_law(law: str, instances: Callable[[], Iterator[tuple]], arity: int, scope: Scope,
             evaluate: Callable[[tuple], tuple], budget: int, seed: int, approximation: str,
             unordered: bool = False, cost: int = 1) -> LawReport:
    # the budget counts operator evaluations, and one instance may need several
    evals = budget
    budget = max(1, budget // cost)
    total = _count(instances, budget)
    sampled = total > budget
    source = _sample(scope, arity, budget, seed, unordered, singles=law == "identity") if sampled else instances()
    checked = 0
    for idx in source:
        checked += 1
        witness = tuple(scope.closure.elems[i] for i in idx)
        lhs, rhs = evaluate(witness)
        if not same_outcome(lhs, rhs):
            return LawReport(law, VIOLATED, witness, lhs, rhs, approximation, checked)
    if sampled:
        return LawReport(law, LAW_UNKNOWN, approximation=approximation, checked=checked,
                         note=f"over the {evals}-evaluation budget; {checked} sampled instances without a violation")
    return LawReport(law, HOLDS, approximation=approximation, checked=checked)


# the laws ----------------------------------------------------------------

ZERO_FREE, ZERO_ONCE, ZERO_LEFTMOST = "free", "once", "leftmost"
ZERO_SLOTS = {ZERO_FREE: None, ZERO_ONCE: 1, ZERO_LEFTMOST: 0}


def identity_sides(comb, zero, e, left_only: bool = False) -> tuple:
    left = attempt(comb, zero, e)
    if left_only or not same_outcome(left, e):
        return left, e
    return attempt(comb, e, zero), e


def commutativity_sides(comb, a, b) -> tuple:
    return attempt(comb, a, b), attempt(comb, b, a)


def associativity_sides(comb, a, b, c) -> tuple:
    ab = attempt(comb, a, b)
    bc = attempt(comb, b, c)
    lhs = ab if type(ab) is Failure else attempt(comb, ab, c)
    rhs = bc if type(bc) is Failure else attempt(comb, a, bc)
    return lhs, rhs


def homomorphism_sides(seq, comb, zero, d, e) -> tuple:
    zd = attempt(seq, zero, d)
    rhs = zd if type(zd) is Failure else attempt(comb, e, zd)
    return attempt(seq, e, d), rhs


def evaluate_law(law: str, *, comb=None, seq=None, zero=None, witness: tuple) -> tuple:
    """Both sides of one law instance; a violation means they differ."""
    if law == "identity":
        return identity_sides(comb, zero, *witness)
    if law == "commutativity":
        return commutativity_sides(comb, *witness)
    if law == "associativity":
        return associativity_sides(comb, *witness)
    if law == "homomorphism":
        return homomorphism_sides(seq, comb, zero, *witness)
    raise ValueError(f"no replay for law {law!r}")


def _closure_law(comb, scope: Scope, budget: int, seed: int) -> LawReport:
    closure = scope.closure
    exact = closure.saturated and scope.grade is None

    def evaluate(w):
        r = attempt(comb, w[0], w[1])
        if type(r) is Failure or r in closure:
            return r, r
        return r, Failure("OutsideImage")

    report = _run_law("closure", lambda: _pairs(scope, False), 2, scope, evaluate, budget, seed, "closure")
    if report.violated and not exact:
        return LawReport("closure", LAW_UNKNOWN, report.witness, report.lhs, None, "closure", report.checked,
                         note="result lies outside the computed approximation of the image")
    return report


def check_monoid_laws(comb, zero, closure: Closure, *, grade: int | None = None, budget: int = DEFAULT_BUDGET,
                      seed: int = 0, approximation: str = "closure", zero_role: str = ZERO_FREE) -> list[LawReport]:
    """Closure, identity, commutativity and associativity on the closure.

    ``zero_role`` says where the bare zero (one no non-empty fold produces)
    can meet ``comb``. ``ZERO_FREE``: anywhere, any number of times.
    ``ZERO_ONCE``: as the result of at most one empty partition, so no
    instance uses it twice, the identity law's own zero included.
    ``ZERO_LEFTMOST``: only as the starting accumulator, so only the left
    identity is required and the other laws never see it.
    """
    if zero_role not in ZERO_SLOTS:
        raise ValueError(f"unknown zero role {zero_role!r}")
    bare_zero = bool(closure.depths) and closure.depths[0] == 0 and not closure.zero_refolded
    scope = Scope(closure, grade, ZERO_SLOTS[zero_role] if bare_zero else None)
    left_only = zero_role == ZERO_LEFTMOST
    approx = "graded" if grade is not None else approximation
    return [
        _closure_law(comb, scope, budget, seed),
        _run_law("identity", lambda: _singles(scope), 1, scope,
                 lambda w: identity_sides(comb, zero, w[0], left_only), budget, seed, approx, cost=2),
        _run_law("commutativity", lambda: _pairs(scope, True), 2, scope,
                 lambda w: commutativity_sides(comb, *w), budget, seed, approx, unordered=True, cost=2),
        _run_law("associativity", lambda: _triples(scope), 3, scope,
                 lambda w: associativity_sides(comb, *w), budget, seed, approx, cost=4),
    ]


def check_semigroup_laws(comb, closure: Closure, *, grade: int | None = None, budget: int = DEFAULT_BUDGET,
                         seed: int = 0, approximation: str = "closure") -> list[LawReport]:
    scope = Scope(closure, grade)
    approx = "graded" if grade is not None else approximation
    return [
        _closure_law(comb, scope, budget, seed),
        _run_law("commutativity", lambda: _pairs(scope, True), 2, scope,
                 lambda w: commutativity_sides(comb, *w), budget, seed, approx, unordered=True, cost=2),
        _run_law("associativity", lambda: _triples(scope), 3, scope,
                 lambda w: associativity_sides(comb, *w), budget, seed, approx, cost=4),
    ]


def check_homomorphism_on(seq, comb, zero, values: Sequence, closure: Closure, *, grade: int | None = None,
                          budget: int = DEFAULT_BUDGET, seed: int = 0, approximation: str = "closure") -> LawReport:
    """``seq(e, d) == comb(e, seq(zero, d))`` for every element d and accumulator e; witness is (d, e)."""
    scope = Scope(closure, grade)
    approx = "graded" if grade is not None else approximation
    n_accs = scope.limit(1) if grade is not None else len(closure)
    vals = list(values)

    def instances():
        for i in range(n_accs):
            for j in range(len(vals)):
                yield (i, j)

    total = n_accs * len(vals)
    evals, budget = budget, max(1, budget // 3)
    sampled = total > budget
    chaos = ChaosSource(seed)
    checked = 0
    source = ((chaos.randbelow(n_accs), chaos.randbelow(len(vals))) for _ in range(budget)) if sampled else instances()
    for i, j in source:
        checked += 1
        d, e = vals[j], closure.elems[i]
        lhs, rhs = homomorphism_sides(seq, comb, zero, d, e)
        if not same_outcome(lhs, rhs):
            return LawReport("homomorphism", VIOLATED, (d, e), lhs, rhs, approx, checked)
    if sampled:
        return LawReport("homomorphism", LAW_UNKNOWN, approximation=approx, checked=checked,
                         note=f"over the {evals}-evaluation budget; {checked} sampled instances without a violation")
    return LawReport("homomorphism", HOLDS, approximation=approx, checked=checked)


def sample_closure(samples: Sequence[Value]) -> Closure:
    c = Closure()
    for v in samples:
        c.add(v, 0, ())
    c.saturated = False
    return c


def ignored_argument(comb, elems: Sequence[Value], limit: int = 24) -> str | None:
    """Name the argument ``comb`` never looks at on these elements, if any."""
    es = list(elems)[:limit]
    if len(es) < 2:
        return None
    table = {}
    for a in es:
        for b in es:
            r = attempt(comb, a, b)
            if type(r) is Failure:
                return None
            table[canon(a), canon(b)] = canon(r)
    keys = [canon(e) for e in es]
    if all(len({table[a, b] for a in keys}) == 1 for b in keys):
        return "first"
    if all(len({table[a, b] for b in keys}) == 1 for a in keys):
        return "second"
    return None


def depth_lists(closure: Closure, *values: Any) -> list[tuple] | None:
    out = []
    for v in values:
        lst = closure.list_for(v)
        if lst is None:
            return None
        out.append(lst)
    return out
