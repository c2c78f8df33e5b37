from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from ..errors import ParseError
from ..values import Value, canon, from_json, render


@dataclass(frozen=True)
class Domain:
    """A finite test universe for the element sort.

    ``sort_samples`` are optional extra accumulator values used for the
    fallback check over the whole accumulator sort rather than the image.
    """

    values: tuple
    name: str = ""
    sort_samples: tuple = ()

    def __post_init__(self) -> None:
        seen, uniq = set(), []
        for v in self.values:
            k = canon(v)
            if k not in seen:
                seen.add(k)
                uniq.append(v)
        object.__setattr__(self, "values", tuple(uniq))
        object.__setattr__(self, "sort_samples", tuple(self.sort_samples))

    def describe(self) -> str:
        if self.name:
            return self.name
        shown = ", ".join(render(v) for v in self.values[:12])
        more = f", ... ({len(self.values)} values)" if len(self.values) > 12 else ""
        return "{" + shown + more + "}"

    def map(self, f) -> "Domain":
        return Domain(tuple(f(v) for v in self.values), self.name, tuple(f(v) for v in self.sort_samples))

    @classmethod
    def int_range(cls, lo: int, hi: int) -> "Domain":
        return cls(tuple(range(lo, hi + 1)), f"{{{lo}..{hi}}}")

    @classmethod
    def of(cls, values: Sequence[Value], name: str = "") -> "Domain":
        return cls(tuple(values), name)


_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def parse_domain(text: str) -> Domain:
    """``lo..hi`` for an integer range, otherwise a JSON array of Values.

    A JSON object ``{"values": [...], "samples": [...]}`` also supplies
    accumulator-sort samples.
    """
    m = _RANGE.match(text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise ParseError(f"empty range {text!r}")
        return Domain.int_range(lo, hi)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"domain is neither lo..hi nor JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    if isinstance(obj, dict) and "values" in obj:
        values = from_json(obj["values"])
        samples = from_json(obj.get("samples", []))
        if not isinstance(values, tuple) or not isinstance(samples, tuple):
            raise ParseError("domain values and samples must be arrays")
        return Domain(values, sort_samples=samples)
    values = from_json(obj)
    if not isinstance(values, tuple) or not values:
        raise ParseError("domain must be a non-empty JSON array")
    return Domain(values)
