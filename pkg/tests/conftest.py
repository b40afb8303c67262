"""Shared test plumbing.

The acceptance module records one verdict per criterion; the terminal
summary hook prints them as a block at the end of the run so the
pass/fail lines survive pytest's output capture.
"""

from __future__ import annotations

_CRITERIA: list[tuple[int, str, bool, str]] = []


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    _CRITERIA.append((number, title, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, passed, detail in sorted(_CRITERIA):
        status = "PASS" if passed else "FAIL"
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {number}: {status} - {title}{suffix}")
