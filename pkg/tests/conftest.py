import numpy as np
import pytest

from harmap.catalog import f_alpha, g_alpha, polynomial_collision
from harmap.convolution import hadamard

ORDER = 64


@pytest.fixture(scope="session")
def order():
    return ORDER


@pytest.fixture(scope="session")
def F():
    return f_alpha(1.0, ORDER, label="F")


@pytest.fixture(scope="session")
def L():
    return f_alpha(-1.0, ORDER, label="L")


@pytest.fixture(scope="session")
def identity_map():
    return g_alpha(0.0, ORDER)


@pytest.fixture(scope="session")
def collision_map():
    return polynomial_collision(ORDER)


@pytest.fixture(scope="session")
def LL(L):
    return hadamard(L, L).product


@pytest.fixture
def rng():
    return np.random.default_rng(7)
