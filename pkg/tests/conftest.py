import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from apollonian_jch.network import generate  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def net():
    """Cached networks by generation."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = generate(n)
        return cache[n]

    return get


@pytest.fixture
def report():
    def record(criterion, ok, detail):
        line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
