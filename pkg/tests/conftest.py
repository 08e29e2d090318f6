"""Collects acceptance results and prints them after the run."""

import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def record(number: int, title: str, passed: bool, detail: str) -> bool:
        _LINES[number] = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
