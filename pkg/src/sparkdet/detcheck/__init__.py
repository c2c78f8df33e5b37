"""Deciding whether a combinator call can observe the partitioning."""

from .checks import (
    check,
    check_aggregate,
    check_aggregate_by_key,
    check_aggregate_messages,
    check_homomorphism,
    check_monoid_laws,
    check_reduce,
    check_reduce_by_key,
    check_tree_aggregate,
    check_tree_reduce,
)
from .domain import Domain, parse_domain
from .oracle import (
    oracle,
    oracle_aggregate,
    oracle_by_key,
    oracle_reduce,
    oracle_tree,
    oracle_tree_reduce,
    sweep,
)
from .runner import replay
from .verdict import (
    DETERMINISTIC,
    NON_DETERMINISTIC,
    UNKNOWN,
    Counterexample,
    Execution,
    LawReport,
    Verdict,
)
from .crossval import AgreementReport, cross_validate
from .shrink import shrink

__all__ = [
    "AgreementReport",
    "Counterexample",
    "DETERMINISTIC",
    "Domain",
    "Execution",
    "LawReport",
    "NON_DETERMINISTIC",
    "UNKNOWN",
    "Verdict",
    "check",
    "check_aggregate",
    "check_aggregate_by_key",
    "check_aggregate_messages",
    "check_homomorphism",
    "check_monoid_laws",
    "check_reduce",
    "check_reduce_by_key",
    "check_tree_aggregate",
    "check_tree_reduce",
    "cross_validate",
    "oracle",
    "oracle_aggregate",
    "oracle_by_key",
    "oracle_reduce",
    "oracle_tree",
    "oracle_tree_reduce",
    "parse_domain",
    "replay",
    "shrink",
    "sweep",
]
