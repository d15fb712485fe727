import pytest

from sktnil.errors import FALSIFICATION_EVENTS


@pytest.fixture(autouse=True)
def no_new_falsifications():
    """Every test must leave the falsification log untouched."""
    before = len(FALSIFICATION_EVENTS)
    yield
    assert FALSIFICATION_EVENTS[before:] == []


CRITERIA_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
