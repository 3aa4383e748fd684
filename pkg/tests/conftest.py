import numpy as np
import pytest

from hilrs.ff import make_tower


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def F4():
    return make_tower(2, 1, 2)


@pytest.fixture(scope="session")
def F9():
    return make_tower(3, 1, 2)


@pytest.fixture(scope="session")
def F3_8():
    return make_tower(3, 1, 8)


@pytest.fixture(scope="session")
def F16():
    return make_tower(2, 1, 4)
