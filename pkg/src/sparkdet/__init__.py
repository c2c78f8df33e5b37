"""Executable model of partitioned aggregation and its determinism conditions."""

from .chaos import ChaosSource
from .errors import SparkdetError
from .opdsl import Operator, OperatorTriple, resolve

__version__ = "0.1.0"

__all__ = [
    "ChaosSource",
    "Operator",
    "OperatorTriple",
    "SparkdetError",
    "resolve",
]
