import numpy as np
import pytest

from gcflow.grid import build_grid


@pytest.fixture(scope="session")
def circle():
    return build_grid(2, 256)


@pytest.fixture(scope="session")
def circle_hi():
    return build_grid(2, 512)


@pytest.fixture(scope="session")
def sphere():
    return build_grid(3, 16)


@pytest.fixture(scope="session")
def sphere_hi():
    return build_grid(3, 32)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
