"""Named, total operators over Values.

Operators come from a fixed registry, from the two Maybe-lifting
combinators, or from a small arithmetic formula language over ``x`` and
``y``. Nothing else is evaluated, so the checker never runs user code.

Examples of names accepted by :func:`resolve`::

    sum_i64_wrapping
    maybe_lift_comb(max_i64)
    expr:x*y
    expr:min(x, y) / 2
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import OperatorError, Overflow, SortMismatch, UnknownOperator
from .values import (
    INT64_MAX,
    INT64_MIN,
    Pair,
    Some,
    Value,
    _SORT_BY_TYPE,
    render,
    sort_accepts,
    wrap_i64,
)

_ALL_SORTS = ("i64", "f64", "bool", "str", "list", "set", "pair", "opt")


def _accepted(declared: str) -> frozenset:
    return frozenset(s for s in _ALL_SORTS if sort_accepts(declared, s))


@dataclass(frozen=True, eq=False)
class Operator:
    name: str
    arity: int
    in_sorts: tuple[str, ...]
    out_sort: str
    fn: Callable[..., Value]
    _accept: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.arity not in (1, 2) or len(self.in_sorts) != self.arity:
            raise ValueError(f"operator {self.name}: arity and input sorts disagree")
        # accepted Python types per argument, so the hot path is one set lookup
        object.__setattr__(self, "_accept", tuple(
            frozenset(t for t, sort in _SORT_BY_TYPE.items() if sort in _accepted(s)) for s in self.in_sorts))

    def check(self, *args: Value) -> None:
        if len(args) != self.arity:
            raise SortMismatch(f"{self.name} takes {self.arity} argument(s), got {len(args)}")
        for pos, (a, ok) in enumerate(zip(args, self._accept)):
            if type(a) not in ok:
                got = _SORT_BY_TYPE.get(type(a), type(a).__name__)
                raise SortMismatch(
                    f"{self.name}: argument {pos + 1} must be {self.in_sorts[pos]}, got {got} {render_safe(a)}"
                )

    def __call__(self, *args: Value) -> Value:
        acc = self._accept
        if len(args) == 2 and len(acc) == 2:
            if type(args[0]) not in acc[0] or type(args[1]) not in acc[1]:
                self.check(*args)
        elif len(args) != len(acc) or any(type(a) not in ok for a, ok in zip(args, acc)):
            self.check(*args)
        return self.fn(*args)

    def __repr__(self) -> str:
        return f"Operator({self.name})"


def render_safe(v: Any) -> str:
    try:
        return render(v)
    except TypeError:
        return repr(v)


@dataclass(frozen=True)
class OperatorTriple:
    """``zero :: b``, ``seq :: b x a -> b`` and ``comb :: b x b -> b``."""

    zero: Value
    seq: Operator
    comb: Operator

    def __post_init__(self) -> None:
        if self.seq.arity != 2 or self.comb.arity != 2:
            raise SortMismatch("seq and comb must both be binary operators")
        # zero must be a legal accumulator for both operators
        self.seq.check(self.zero, _witness(self.seq.in_sorts[1]))
        self.comb.check(self.zero, self.zero)

    def describe(self) -> dict:
        return {"zero": render_safe(self.zero), "seq": self.seq.name, "comb": self.comb.name}


_WITNESS = {"i64": 0, "f64": 0.0, "num": 0, "bool": False, "str": "", "list": (), "set": frozenset(),
            "pair": Pair(0, 0), "opt": None}


def _witness(sort: str) -> Value:
    return _WITNESS.get(sort, 0)


# built-ins ---------------------------------------------------------------


def _checked_add(x: int, y: int) -> int:
    r = x + y
    if not INT64_MIN <= r <= INT64_MAX:
        raise Overflow(f"sum_i64_checked: {x} + {y} overflows 64 bits")
    return r


def _checked_mul(x: int, y: int) -> int:
    r = x * y
    if not INT64_MIN <= r <= INT64_MAX:
        raise Overflow(f"mul_i64_checked: {x} * {y} overflows 64 bits")
    return r


FACTORS_LIMIT = 1 << 32


def _divisors(n: int) -> tuple:
    n = abs(n)
    # trial division up to the square root; refuse inputs that would take too long
    if n > FACTORS_LIMIT:
        raise OperatorError(f"factors_i64: {n} exceeds the supported bound {FACTORS_LIMIT}")
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return tuple(sorted(set(small) | {n // d for d in small}))


def _mean_merge(a: Pair, b: Pair) -> Pair:
    return Pair(a.key + b.key, a.value + b.value)


def _mean_add(acc: Pair, x) -> Pair:
    return Pair(acc.key + x, acc.value + 1)


def _op(name, sorts, out, fn) -> Operator:
    return Operator(name, len(sorts), tuple(sorts), out, fn)


_BUILTINS: dict[str, Operator] = {}


def _register(*ops: Operator) -> None:
    for op in ops:
        _BUILTINS[op.name] = op


_register(
    _op("sum_i64_wrapping", ("i64", "i64"), "i64", lambda x, y: wrap_i64(x + y)),
    _op("sum_i64_checked", ("i64", "i64"), "i64", _checked_add),
    _op("sub_i64", ("i64", "i64"), "i64", lambda x, y: wrap_i64(x - y)),
    _op("mul_i64_wrapping", ("i64", "i64"), "i64", lambda x, y: wrap_i64(x * y)),
    _op("mul_i64_checked", ("i64", "i64"), "i64", _checked_mul),
    _op("max_i64", ("i64", "i64"), "i64", max),
    _op("min_i64", ("i64", "i64"), "i64", min),
    _op("sum_f64", ("f64", "f64"), "f64", lambda x, y: x + y),
    _op("sub_f64", ("f64", "f64"), "f64", lambda x, y: x - y),
    _op("mul_f64", ("f64", "f64"), "f64", lambda x, y: x * y),
    _op("max_f64", ("f64", "f64"), "f64", lambda x, y: y if (y > x or x != x) else x),
    _op("min_f64", ("f64", "f64"), "f64", lambda x, y: y if (y < x or x != x) else x),
    _op("concat_list", ("list", "list"), "list", lambda x, y: x + y),
    _op("append", ("list", "any"), "list", lambda xs, y: xs + (y,)),
    _op("union_set", ("set", "set"), "set", lambda x, y: x | y),
    _op("insert_set", ("set", "any"), "set", lambda s, y: s | {y}),
    _op("or_bool", ("bool", "bool"), "bool", lambda x, y: x or y),
    _op("and_bool", ("bool", "bool"), "bool", lambda x, y: x and y),
    _op("first", ("any", "any"), "any", lambda x, y: x),
    _op("second", ("any", "any"), "any", lambda x, y: y),
    _op("const_left", ("any", "any"), "any", lambda x, y: x),
    _op("mean_pair_merge", ("pair", "pair"), "pair", _mean_merge),
    _op("mean_pair_add", ("pair", "num"), "pair", _mean_add),
    # unary operators, used by the chaotic map primitives
    _op("identity", ("any",), "any", lambda x: x),
    _op("negate_i64", ("i64",), "i64", lambda x: wrap_i64(-x)),
    _op("even_i64", ("i64",), "bool", lambda x: x % 2 == 0),
    _op("factors_i64", ("i64",), "list", _divisors),
    _op("singleton_list", ("any",), "list", lambda x: (x,)),
    _op("singleton_set", ("any",), "set", lambda x: frozenset((x,))),
    _op("some", ("any",), "opt", Some),
    _op("fst", ("pair",), "any", lambda p: p.key),
    _op("snd", ("pair",), "any", lambda p: p.value),
)

_ALIASES = {"sum_i64": "sum_i64_wrapping", "mul_i64": "mul_i64_wrapping", "max": "max_i64", "min": "min_i64"}


def builtin_names() -> list[str]:
    return sorted([*_BUILTINS, *_ALIASES])


# Maybe lifting -----------------------------------------------------------


def maybe_lift_seq(op: Operator) -> Operator:
    """``seq'``: absent accumulator becomes the element, otherwise combine."""
    _need_binary(op)
    f = op.fn

    def seq(acc, y):
        if acc is None:
            op.check(y, y)
            return Some(y)
        op.check(acc.value, y)
        return Some(f(acc.value, y))

    return Operator(f"maybe_lift_seq({op.name})", 2, ("opt", op.in_sorts[1]), "opt", seq)


def maybe_lift_comb(op: Operator) -> Operator:
    """``comb'``: absent is a two-sided identity, present values combine."""
    _need_binary(op)
    f = op.fn

    def comb(a, b):
        if a is None:
            return b
        if b is None:
            return a
        op.check(a.value, b.value)
        return Some(f(a.value, b.value))

    return Operator(f"maybe_lift_comb({op.name})", 2, ("opt", "opt"), "opt", comb)


def lift_to_maybe(op: Operator) -> tuple[Operator, Operator]:
    return maybe_lift_seq(op), maybe_lift_comb(op)


def _need_binary(op: Operator) -> None:
    if op.arity != 2:
        raise SortMismatch(f"{op.name} is not a binary operator")


# formula language --------------------------------------------------------


def ieee_div(a: float, b: float) -> float:
    if b != 0.0:
        return a / b
    if a != a or a == 0.0:
        return math.nan
    return math.copysign(math.inf, a) * math.copysign(1.0, b)


def _fmin(a: float, b: float) -> float:
    return math.nan if a != a or b != b else min(a, b)


def _fmax(a: float, b: float) -> float:
    return math.nan if a != a or b != b else max(a, b)


_FUNCS = {"min": (_fmin, 2), "max": (_fmax, 2), "abs": (abs, 1)}


def _compile(node: ast.AST, src: str) -> Callable[[float, float], float]:
    if isinstance(node, ast.Expression):
        return _compile(node.body, src)
    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        c = float(node.value)
        return lambda x, y: c
    if isinstance(node, ast.Name) and node.id in ("x", "y"):
        return (lambda x, y: x) if node.id == "x" else (lambda x, y: y)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, src)
        return (lambda x, y: -inner(x, y)) if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        l, r = _compile(node.left, src), _compile(node.right, src)
        if isinstance(node.op, ast.Add):
            return lambda x, y: l(x, y) + r(x, y)
        if isinstance(node.op, ast.Sub):
            return lambda x, y: l(x, y) - r(x, y)
        if isinstance(node.op, ast.Mult):
            return lambda x, y: l(x, y) * r(x, y)
        if isinstance(node.op, ast.Div):
            return lambda x, y: ieee_div(l(x, y), r(x, y))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and not node.keywords:
        fn, n = _FUNCS[node.func.id]
        if len(node.args) != n:
            raise UnknownOperator(f"expr:{src}: {node.func.id} takes {n} argument(s)")
        args = [_compile(a, src) for a in node.args]
        if n == 1:
            a0 = args[0]
            return lambda x, y: fn(a0(x, y))
        a0, a1 = args
        return lambda x, y: fn(a0(x, y), a1(x, y))
    raise UnknownOperator(f"expr:{src}: unsupported syntax {ast.dump(node)[:60]}")


def compile_expr(src: str) -> Operator:
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as e:
        raise UnknownOperator(f"expr:{src}: {e.msg}") from None
    body = _compile(tree, src)
    names = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)} - set(_FUNCS)
    name = f"expr:{src.strip()}"
    if names == {"x"}:
        return Operator(name, 1, ("num",), "f64", lambda x: body(float(x), 0.0))
    return Operator(name, 2, ("num", "num"), "f64", lambda x, y: body(float(x), float(y)))


# resolution --------------------------------------------------------------

_LIFT = re.compile(r"^\s*(maybe_lift_seq|maybe_lift_comb)\s*\((.*)\)\s*$", re.S)


def resolve(name: str) -> Operator:
    name = name.strip()
    if name.startswith("expr:"):
        return compile_expr(name[5:])
    m = _LIFT.match(name)
    if m:
        inner = resolve(m.group(2))
        return maybe_lift_seq(inner) if m.group(1) == "maybe_lift_seq" else maybe_lift_comb(inner)
    canonical = _ALIASES.get(name, name)
    try:
        op = _BUILTINS[canonical]
    except KeyError:
        raise UnknownOperator(f"unknown operator {name!r}") from None
    if canonical != name:
        return Operator(name, op.arity, op.in_sorts, op.out_sort, op.fn)
    return op
