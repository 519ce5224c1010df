import sys
from pathlib import Path

import pytest

from hgpcert.codes import ClassicalCode, cycle_code
from hgpcert.f2core import BitMatrix
from hgpcert.hgp import product

sys.path.insert(0, str(Path(__file__).parent))

REP_LITERAL = """
11..
.11.
..11
"""

DB_LITERAL = """
1..
11.
.11
..1
"""


@pytest.fixture
def rep_check():
    return BitMatrix.parse(REP_LITERAL)


@pytest.fixture
def rep_code(rep_check):
    return ClassicalCode(rep_check, "rep4")


@pytest.fixture
def db_code():
    return ClassicalCode(BitMatrix.parse(DB_LITERAL), "rep4^T")


@pytest.fixture
def surface(rep_code, db_code):
    return product(rep_code, db_code)


@pytest.fixture
def toric():
    return product(cycle_code(4), cycle_code(4))


_acceptance: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    number = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[number] = ("PASS" if report.passed else "FAIL", item.name)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        verdict, name = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {name}")
