import numpy as np
import pytest

from gendirac.algebra import ModelParameters

SWEEP = (-0.24, -3 / 16, -0.1, 0.5, 3 / 4, 2.0, 10.0)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def params():
    return ModelParameters(m=1.0, a=2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
