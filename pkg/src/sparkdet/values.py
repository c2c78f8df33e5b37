"""The closed universe of element values.

Python natives stand in for most sorts: ``int`` is Int64, ``float`` is
Float64, ``bool``, ``str``, ``tuple`` is List and ``frozenset`` is Set.
Pairs and present optionals get their own small classes, and ``None`` is the
absent optional.

Structural equality goes through :func:`canon`, which distinguishes ``1``
from ``True`` and ``1.0``, compares floats bitwise and folds every NaN into
one value.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import ParseError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


@dataclass(frozen=True, slots=True)
class Pair:
    key: Any
    value: Any

    def __iter__(self):
        yield self.key
        yield self.value


@dataclass(frozen=True, slots=True)
class Some:
    value: Any


Value = Any

SORTS = ("i64", "f64", "bool", "str", "list", "set", "pair", "opt")

_SORT_BY_TYPE = {
    bool: "bool",
    int: "i64",
    float: "f64",
    str: "str",
    tuple: "list",
    frozenset: "set",
    Pair: "pair",
    Some: "opt",
    type(None): "opt",
}


def sort_of(v: Value) -> str:
    try:
        return _SORT_BY_TYPE[type(v)]
    except KeyError:
        raise TypeError(f"not a Value: {v!r} of type {type(v).__name__}") from None


def sort_accepts(declared: str, actual: str) -> bool:
    if declared == actual or declared == "any":
        return True
    return declared == "num" and actual in ("i64", "f64")


def wrap_i64(n: int) -> int:
    n &= 0xFFFFFFFFFFFFFFFF
    return n - (1 << 64) if n >> 63 else n


def float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", x))[0]


def canon(v: Value):
    """Hashable key with exactly the structural equality of Values."""
    t = type(v)
    if t is int:
        return ("i", v)
    if t is float:
        return ("f", "nan") if v != v else ("f", float_bits(v))
    if t is bool:
        return ("b", v)
    if t is str:
        return ("s", v)
    if t is tuple:
        return ("l", tuple(canon(x) for x in v))
    if t is frozenset:
        return ("S", frozenset(canon(x) for x in v))
    if t is Pair:
        return ("p", canon(v.key), canon(v.value))
    if t is Some:
        return ("o", canon(v.value))
    if v is None:
        return ("n",)
    raise TypeError(f"not a Value: {v!r}")


def values_equal(a: Value, b: Value) -> bool:
    ta, tb = type(a), type(b)
    if ta is not tb:
        return False
    if ta is int or ta is str or ta is bool:
        return a == b
    return canon(a) == canon(b)


def order_key(v: Value):
    """A total order on Values, used only to make outputs stable."""
    return _order(canon(v))


def _order(c):
    tag = c[0]
    if tag == "S":
        return (tag, tuple(sorted(_order(x) for x in c[1])))
    if tag in ("l",):
        return (tag, tuple(_order(x) for x in c[1]))
    if tag in ("p",):
        return (tag, _order(c[1]), _order(c[2]))
    if tag == "o":
        return (tag, _order(c[1]))
    if tag == "f" and c[1] != "nan":
        # order numerically, not by bit pattern
        bits = c[1]
        x = struct.unpack("<d", struct.pack("<Q", bits))[0]
        return (tag, 0, x, bits)
    if tag == "f":
        return (tag, 1, 0.0, 0)
    return c


def make_set(items: Iterable[Value]) -> frozenset:
    return frozenset(items)


# JSON --------------------------------------------------------------------


def to_json(v: Value):
    t = type(v)
    if t is bool or t is int or t is str or v is None:
        return v
    if t is float:
        if math.isnan(v):
            return {"f64": "nan"}
        if math.isinf(v):
            return {"f64": "inf" if v > 0 else "-inf"}
        return v
    if t is tuple:
        return [to_json(x) for x in v]
    if t is frozenset:
        return {"set": [to_json(x) for x in sorted(v, key=order_key)]}
    if t is Pair:
        return {"pair": [to_json(v.key), to_json(v.value)]}
    if t is Some:
        return {"some": to_json(v.value)}
    raise TypeError(f"not a Value: {v!r}")


def from_json(obj) -> Value:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        if not INT64_MIN <= obj <= INT64_MAX:
            raise ParseError(f"integer {obj} does not fit in 64 bits")
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, list):
        return tuple(from_json(x) for x in obj)
    if isinstance(obj, dict) and len(obj) == 1:
        (tag, body), = obj.items()
        if tag == "set" and isinstance(body, list):
            return frozenset(from_json(x) for x in body)
        if tag == "pair" and isinstance(body, list) and len(body) == 2:
            return Pair(from_json(body[0]), from_json(body[1]))
        if tag == "some":
            return Some(from_json(body))
        if tag == "f64":
            try:
                return float(body)
            except (TypeError, ValueError):
                raise ParseError(f"bad f64 literal {body!r}") from None
    raise ParseError(f"cannot read a Value from {json.dumps(obj)}")


def render(v: Value) -> str:
    """Compact human-readable form, also used as a census key."""
    return json.dumps(to_json(v), separators=(",", ":"), allow_nan=False)
