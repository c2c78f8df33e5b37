from __future__ import annotations


class SparkdetError(Exception):
    """Base class for every error raised by this package."""


class LocatedError(SparkdetError):
    """An evaluation error that can carry where in an Rdd it happened."""

    def __init__(self, message: str, *, partition: int | None = None, element: int | None = None):
        super().__init__(message)
        self.message = message
        self.partition = partition
        self.element = element

    def locate(self, partition: int | None = None, element: int | None = None) -> "LocatedError":
        # keep the innermost location if one was already recorded
        if self.partition is None:
            self.partition = partition
        if self.element is None:
            self.element = element
        return self

    def __str__(self) -> str:
        where = []
        if self.partition is not None:
            where.append(f"partition {self.partition}")
        if self.element is not None:
            where.append(f"element {self.element}")
        return self.message if not where else f"{self.message} (at {', '.join(where)})"


class SortMismatch(LocatedError):
    pass


class OperatorError(LocatedError):
    """An operator refused its inputs, e.g. checked overflow."""


class Overflow(OperatorError):
    pass


class UnknownOperator(SparkdetError):
    pass


class CapExceeded(SparkdetError):
    pass


class EmptyPartition(SparkdetError):
    pass


class EmptyRdd(SparkdetError):
    pass


class EmptyList(SparkdetError):
    pass


class InvalidPlan(SparkdetError):
    pass


class BudgetExceeded(SparkdetError):
    pass


class DanglingEdge(SparkdetError):
    pass


class DuplicateVertex(SparkdetError):
    pass


class EncodingViolation(SparkdetError):
    pass


class ParseError(SparkdetError):
    def __init__(self, message: str, *, line: int | None = None, column: int | None = None, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        parts = []
        if source:
            parts.append(source)
        if line is not None:
            parts.append(f"line {line}")
        if column is not None:
            parts.append(f"column {column}")
        prefix = ":".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
