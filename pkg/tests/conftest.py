import sys

import pytest

from mbt.domains import get_domain

sys.setrecursionlimit(20000)

_acceptance_results: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def sums():
    return get_domain("sumreduce")


@pytest.fixture(scope="session")
def polyeq():
    return get_domain("polyeq")


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    if report.passed:
        outcome = "PASS"
    elif report.failed:
        outcome = "FAIL"
    else:
        outcome = "SKIP"
    _acceptance_results.append((outcome, report.nodeid.split("::", 1)[1]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for outcome, name in _acceptance_results:
        terminalreporter.write_line(f"{outcome}  {name}")
