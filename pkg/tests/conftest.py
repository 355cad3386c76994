from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(LINES):
        terminalreporter.write_line(LINES[number])


@pytest.fixture
def record():
    from acceptance_log import record as _record
    return _record
