"""Schema-versioned JSON run reports.

Everything outside the ``timing`` object is a pure function of the command
line, so re-running a command with the same seed reproduces it byte for byte.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Sequence

from .detcheck.verdict import Verdict, outcome_json, outcome_key, render_outcome

SCHEMA_VERSION = 1
VOLATILE_FIELDS = ("timing",)


def census(outputs: Sequence) -> list[dict]:
    """Distinct outputs with their counts, most frequent first, ties by rendering."""
    counts: Counter = Counter()
    first: dict = {}
    for o in outputs:
        k = outcome_key(o)
        counts[k] += 1
        first.setdefault(k, o)
    rows = [(counts[k], render_outcome(v), v) for k, v in first.items()]
    rows.sort(key=lambda r: (-r[0], r[1]))
    return [{"value": outcome_json(v), "count": n} for n, _, v in rows]


@dataclass
class RunReport:
    command: list[str]
    subcommand: str
    seed: int | None = None
    params: dict = field(default_factory=dict)
    trials: list[dict] = field(default_factory=list)
    outputs: list = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    exit_code: int = 0
    wall_time: float | None = None
    timestamp: str | None = None

    def add_trial(self, index: int, seed_state, output) -> None:
        self.trials.append({"trial": index, "chaos": list(seed_state), "output": outcome_json(output)})
        self.outputs.append(output)

    def to_json(self) -> dict:
        d: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "command": list(self.command),
            "subcommand": self.subcommand,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        d["params"] = self.params
        if self.trials:
            d["trials"] = self.trials
            d["census"] = census(self.outputs)
            d["distinct"] = len(d["census"])
        if self.verdicts:
            d["verdicts"] = [v.to_json() for v in self.verdicts]
        d.update(self.extra)
        d["exitCode"] = self.exit_code
        d["timing"] = {
            "wallSeconds": self.wall_time,
            "timestamp": self.timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


def stable_view(doc: dict) -> dict:
    """The part of a report covered by the reproducibility contract."""
    return {k: v for k, v in doc.items() if k not in VOLATILE_FIELDS}


def stable_dumps(doc: dict) -> str:
    return json.dumps(stable_view(doc), indent=2, ensure_ascii=False)
