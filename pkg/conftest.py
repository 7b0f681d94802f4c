"""
Shared fixtures for the integral test suites
"""
import numpy as np
import pytest
from scipy.special import spherical_jn

from core import ExpParams, PowerIndices


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: oracle sweeps and dense grids")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def table_params():
    """Exponents shared by the published tables"""
    return ExpParams(2.35, 1.41, 0.567)


@pytest.fixture
def unit_params():
    return ExpParams(1.0, 1.0, 1.0)


@pytest.fixture
def bessel_params():
    return ExpParams(2.0, 2.0, 1.0)


@pytest.fixture
def random_case(rng):
    """Draws (PowerIndices, ExpParams) with all exponents in [1, 3]"""
    def draw(max_power: int = 3):
        k, l, n = (int(v) for v in rng.integers(0, max_power + 1, size=3))
        alpha, beta, gamma = (float(v) for v in rng.uniform(1.0, 3.0, size=3))
        return PowerIndices(k, l, n), ExpParams(alpha, beta, gamma)
    return draw


def jl_of(order: int, V: float, which: int = 0):
    """Oracle factor j_L(V r) of r32 (which=0), r31 (1) or r21 (2)"""
    def factor(r32, r31, r21):
        return spherical_jn(order, V * (r32, r31, r21)[which])
    return factor
