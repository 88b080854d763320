import json
from pathlib import Path

import pytest

from approx_adders.cost_model import Table2Reference, default_library

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def lib():
    return default_library()


@pytest.fixture(scope="session")
def table2():
    return Table2Reference.load()


@pytest.fixture(scope="session")
def oracle_n8():
    """Frozen output of tests/oracles/bruteforce_errors.py, keyed by (style, k)."""
    rows = json.loads((DATA / "bruteforce_n8.json").read_text())
    return {(r["style"], r["k"]): r for r in rows}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
