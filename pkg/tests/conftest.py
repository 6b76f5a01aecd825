import numpy as np
import pytest

from cayley_tdse.grid import PhysicalConstants, build_grid


@pytest.fixture
def unit_constants():
    return PhysicalConstants(1.0, 1.0)


@pytest.fixture
def wide_grid():
    return build_grid(-100.0, 100.0, 4000)


@pytest.fixture
def rng():
    return np.random.default_rng(20221005)


def random_complex(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
