import numpy as np
import pytest

from flatcurve.graph import Graph


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    return Graph.from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def k4():
    return Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for number in sorted(REPORT):
            terminalreporter.write_line(REPORT[number])
