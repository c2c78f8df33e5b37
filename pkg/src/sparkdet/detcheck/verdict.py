from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..core import Partitioning
from ..errors import SparkdetError
from ..values import canon, render, to_json

DETERMINISTIC = "deterministic"
NON_DETERMINISTIC = "nonDeterministic"
UNKNOWN = "unknown"

HOLDS = "holds"
VIOLATED = "violated"
LAW_UNKNOWN = "unknown"


@dataclass(frozen=True)
class Failure:
    """The outcome of an evaluation that raised instead of returning."""

    error: str
    message: str = ""

    def to_json(self) -> dict:
        return {"error": self.error, "message": self.message}


def attempt(fn, *args):
    try:
        return fn(*args)
    except SparkdetError as e:
        return Failure(type(e).__name__, str(e))


def outcome_key(v):
    return ("!", v.error) if type(v) is Failure else canon(v)


def same_outcome(a, b) -> bool:
    if a is b:
        return True
    t = type(a)
    if t is not type(b):
        return False
    if t is int or t is str or t is bool:
        return a == b
    return outcome_key(a) == outcome_key(b)


def render_outcome(v) -> str:
    return f"<{v.error}>" if type(v) is Failure else render(v)


def outcome_json(v):
    return v.to_json() if type(v) is Failure else to_json(v)


@dataclass(frozen=True)
class LawReport:
    law: str
    status: str
    witness: tuple | None = None
    lhs: Any = None
    rhs: Any = None
    approximation: str = "closure"
    checked: int = 0
    note: str = ""

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    def to_json(self) -> dict:
        d: dict = {"law": self.law, "status": self.status, "approximation": self.approximation, "checked": self.checked}
        if self.witness is not None:
            d["witness"] = [outcome_json(w) for w in self.witness]
            d["lhs"] = outcome_json(self.lhs)
            d["rhs"] = outcome_json(self.rhs)
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class Execution:
    """One way of running a combinator on a fixed input list.

    ``partitioning`` None means the sequential reference (foldl or reducel).
    ``plan`` is the reduction plan for the tree combinators.
    """

    partitioning: Partitioning | None = None
    plan: tuple[int, ...] | None = None

    @property
    def is_reference(self) -> bool:
        return self.partitioning is None

    def describe(self, xs) -> str:
        if self.partitioning is None:
            return "sequential reference"
        rdd = self.partitioning.apply(xs)
        parts = "[" + ", ".join("[" + ", ".join(render(x) for x in p) + "]" for p in rdd) + "]"
        return parts if self.plan is None else f"{parts} plan {list(self.plan)}"

    def to_json(self) -> dict:
        if self.partitioning is None:
            return {"reference": True}
        d = {"partitioning": self.partitioning.to_json()}
        if self.plan is not None:
            d["plan"] = list(self.plan)
        return d


@dataclass(frozen=True)
class Counterexample:
    combinator: str
    input: tuple
    a: Execution
    b: Execution
    out_a: Any
    out_b: Any

    def to_json(self) -> dict:
        return {
            "combinator": self.combinator,
            "input": [to_json(x) for x in self.input],
            "a": {**self.a.to_json(), "shape": self.a.describe(self.input), "output": outcome_json(self.out_a)},
            "b": {**self.b.to_json(), "shape": self.b.describe(self.input), "output": outcome_json(self.out_b)},
        }

    def summary(self) -> str:
        return (
            f"input {render(self.input)}: {self.a.describe(self.input)} -> {render_outcome(self.out_a)}; "
            f"{self.b.describe(self.input)} -> {render_outcome(self.out_b)}"
        )


@dataclass(frozen=True)
class Verdict:
    status: str
    counterexample: Counterexample | None = None
    law_reports: tuple[LawReport, ...] = ()
    method: str = "conditions"
    domain: str = ""
    label: str = ""
    warnings: tuple[str, ...] = ()
    cause: str | None = None
    evaluations: int = 0
    exhaustive: bool = True

    @property
    def failed_laws(self) -> list[str]:
        return [r.law for r in self.law_reports if r.violated]

    def to_json(self) -> dict:
        d: dict = {"status": self.status, "method": self.method}
        if self.label:
            d["label"] = self.label
        if self.domain:
            d["domain"] = self.domain
        if self.cause:
            d["cause"] = self.cause
        d["exhaustive"] = self.exhaustive
        d["evaluations"] = self.evaluations
        d["laws"] = [r.to_json() for r in self.law_reports]
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample.to_json()
        if self.warnings:
            d["warnings"] = list(self.warnings)
        return d
