"""Shared pytest hooks for the acceptance scoreboard.

The acceptance tests record one line per criterion through the
``acceptance_report`` fixture; the terminal-summary hook replays those
lines after the run so the scoreboard is visible even when every
criterion passes and pytest captures per-test output.
"""

import pytest

_scoreboard = []


@pytest.fixture
def acceptance_report():
    def _report(criterion, ok, detail):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {criterion}: {status} - {detail}"
        _scoreboard.append(line)
        print(line)
        return line

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _scoreboard:
        return
    terminalreporter.section("acceptance criteria")
    for line in _scoreboard:
        terminalreporter.write_line(line)
