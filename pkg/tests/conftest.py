import numpy as np
import pytest

from deltaideal.tensor_core import random_curvature_tensor

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_tensor(rng):
    def make(n, scale=1.0):
        return random_curvature_tensor(n, rng, scale)

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
