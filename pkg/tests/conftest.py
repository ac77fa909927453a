"""Shared pytest configuration: acceptance-criteria reporting.

Each test_c##_* test in test_acceptance.py maps to one acceptance
criterion; the terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_results[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_acceptance_results):
        outcome = _acceptance_results[name]
        label = name.replace("test_", "", 1)
        marker = terminalreporter._tw.markup(outcome, green=outcome == "PASS", red=outcome == "FAIL")
        terminalreporter.write_line(f"{marker}  {label}")
