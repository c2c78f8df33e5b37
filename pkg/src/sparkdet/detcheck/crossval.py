"""Agreement between the law-based checks and the brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from ..values import render
from .checks import check
from .domain import Domain
from .oracle import oracle, sweep
from .runner import BY_KEY_COMBINATORS, as_pairs
from .verdict import NON_DETERMINISTIC, UNKNOWN, Verdict


@dataclass
class AgreementReport:
    combinator: str
    domain: str
    max_len: int
    conditions: Verdict
    oracle: Verdict
    lists_checked: int = 0
    disagreements: list[str] = field(default_factory=list)

    @property
    def abstained(self) -> bool:
        return self.conditions.status == UNKNOWN

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "combinator": self.combinator,
            "domain": self.domain,
            "maxLength": self.max_len,
            "conditions": self.conditions.status,
            "oracle": self.oracle.status,
            "abstained": self.abstained,
            "agree": self.agree,
            "listsChecked": self.lists_checked,
            "disagreements": list(self.disagreements),
        }


def cross_validate(combinator: str, ops: Any, dom, max_len: int = 4, *, keys: Sequence | None = None,
                   sample_lists: Sequence[Sequence] = (), budget: int = 10**6) -> AgreementReport:
    """Compare both methods on every list of length <= ``max_len`` over ``dom``.

    The law check runs graded at ``max_len`` so it sees exactly the
    accumulators those lists can build. Any ``sample_lists`` are also run
    through the per-list oracle: a non-deterministic list there must come
    with a non-deterministic law verdict.
    """
    dom = dom if isinstance(dom, Domain) else Domain(tuple(dom))
    cond = check(combinator, ops, dom, grade=max_len, budget=budget)
    orc = sweep(combinator, ops, dom.values, max_len, keys=keys, domain_name=dom.describe())
    report = AgreementReport(combinator, dom.describe(), max_len, cond, orc)
    if cond.status != UNKNOWN and cond.status != orc.status:
        report.disagreements.append(f"laws say {cond.status}, exhaustive oracle says {orc.status}")
    for xs in sample_lists:
        xs = tuple(xs)
        if combinator in BY_KEY_COMBINATORS:
            xs = as_pairs(xs)
        v = oracle(combinator, ops, xs)
        report.lists_checked += 1
        if v.status == NON_DETERMINISTIC and cond.status not in (NON_DETERMINISTIC, UNKNOWN):
            report.disagreements.append(f"list {render(xs)} is non-deterministic but laws say {cond.status}")
    return report
