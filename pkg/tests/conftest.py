import numpy as np
import pytest

from twprobe.core import DensityMatrix

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20021)


def random_density_matrix(rng, dim=2, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
