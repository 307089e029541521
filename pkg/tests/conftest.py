import numpy as np
import pytest

from qbnwalk.weights import DEFAULT_WEIGHT


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def w0():
    return DEFAULT_WEIGHT


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
