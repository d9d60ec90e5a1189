"""Shared fixtures, plus the acceptance-summary hook.

Tests in ``test_acceptance.py`` record one verdict per numbered criterion;
after the run pytest prints a single PASS/FAIL line for each so the
acceptance status is readable without digging through tracebacks.
"""

import pytest


class AcceptanceLog:
    def __init__(self):
        self.rows = {}

    def record(self, number: int, title: str, passed: bool, detail: str = "") -> None:
        self.rows[number] = (title, bool(passed), detail)


_LOG = AcceptanceLog()


@pytest.fixture(scope="session")
def acceptance():
    return _LOG


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _LOG.rows:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LOG.rows):
        title, passed, detail = _LOG.rows[number]
        verdict = "PASS" if passed else "FAIL"
        line = f"[{verdict}] criterion {number}: {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
