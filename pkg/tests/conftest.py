from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion and echo them in the summary."""
    log = request.config.stash.setdefault(_ACCEPTANCE, [])
    state = {"done": False}

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        print(line)
        log.append(line)
        state["done"] = True
        assert ok, line

    yield record
    if not state["done"]:
        log.append(f"FAIL {request.node.name}: raised before reaching its verdict")


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=_criterion_number):
            terminalreporter.write_line(line)


def _criterion_number(line: str) -> int:
    head = line.split(":")[0].split()
    return int(head[-1]) if head[-1].isdigit() else 99
