from pathlib import Path

import pytest
from hypothesis import strategies as st

from percodual.lattice import Configuration

GOLDEN = Path(__file__).parent / "golden"


@st.composite
def configurations(draw, max_side=6, min_side=1):
    w = draw(st.integers(min_side, max_side))
    h = draw(st.integers(min_side, max_side))
    bits = draw(st.integers(0, (1 << (w * h)) - 1))
    return Configuration(w, h, bits)


@pytest.fixture
def golden():
    return GOLDEN


_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when == "teardown":
        return
    number, title = mark.args
    if report.when == "call" or report.failed or report.skipped:
        _criteria[number] = (title, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed = _criteria[number]
        terminalreporter.write_line(f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}")
