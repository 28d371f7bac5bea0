import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tunnelkit import DissipativeBarrier  # noqa: E402

V0 = 1.8
LENGTH = 20.8


@pytest.fixture
def showcase():
    return DissipativeBarrier(V0, LENGTH)


_ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
