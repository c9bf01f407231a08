import sys

import numpy as np
import pytest

from ropelength import load_fixture
from ropelength.quadrisecant import find_quadrisecants
from ropelength.thickness import normalize_to_unit_thickness


def regular_polygon(n: int, radius: float = 1.0) -> np.ndarray:
    u = 2 * np.pi * np.arange(n) / n
    return np.column_stack([radius * np.cos(u), radius * np.sin(u), np.zeros(n)])


@pytest.fixture(scope="session")
def trefoil():
    return load_fixture("trefoil64")


@pytest.fixture(scope="session")
def unit_trefoil(trefoil):
    return normalize_to_unit_thickness(trefoil)


@pytest.fixture(scope="session")
def trefoil_scan(unit_trefoil):
    return find_quadrisecants(unit_trefoil)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "CRITERIA_LINES", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
