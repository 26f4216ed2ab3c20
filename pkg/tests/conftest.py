"""Shared fixtures plus the acceptance-summary terminal section."""

from __future__ import annotations

import pytest

from gf2gdd import build_field

ACCEPTANCE_LINES: list[tuple[int, str]] = []


def record_criterion(num: int, line: str) -> None:
    ACCEPTANCE_LINES.append((num, line))


@pytest.fixture(scope="session")
def ctx3():
    return build_field(3)


@pytest.fixture(scope="session")
def ctx4():
    return build_field(4)


@pytest.fixture(scope="session")
def ctx5():
    return build_field(5)


@pytest.fixture(scope="session")
def ctx6():
    return build_field(6)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
