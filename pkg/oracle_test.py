"""
Tests for the brute-force perimetric quadrature and the 1D double-exponential rules
"""
import itertools
import math

import numpy as np
import pytest

from bessel_single import BesselIntegralSpec, bessel0_integral
from conftest import jl_of
from core import PowerIndices, gamma_klm
from errors import ConvergenceError, IntegralDomainError
from oracle import OracleSpec, monomial, perimetric_quad, quad1d_finite, quad1d_semiinfinite, quad3d
from uehling import bessel_k0


def _one(r32, r31, r21):
    return np.ones_like(r32)


def test_volume_weighted_unit_integrand(unit_params):
    result = quad3d(OracleSpec(_one, unit_params, include_volume_weight=True))
    assert result.value == pytest.approx(gamma_klm(PowerIndices(1, 1, 1), unit_params).value, rel=1e-12)


def test_unweighted_unit_integrand(unit_params):
    assert quad3d(OracleSpec(_one, unit_params)).value == pytest.approx(0.25, rel=1e-13)


def test_bessel_integrand_matches_series(table_params):
    V = 0.5
    oracle = quad3d(OracleSpec(monomial(3, 2, 1, jl_of(0, V)), table_params, nodes_per_axis=48))
    series = bessel0_integral(BesselIntegralSpec(PowerIndices(3, 2, 1), table_params, V))
    assert oracle.value == pytest.approx(series.value, rel=1e-9)


@pytest.mark.slow
def test_closed_form_gamma_over_power_grid(table_params):
    for k, l, n in itertools.product(range(5), repeat=3):
        oracle = quad3d(OracleSpec(monomial(k, l, n), table_params))
        closed = gamma_klm(PowerIndices(k, l, n), table_params)
        assert oracle.value == pytest.approx(closed.value, rel=1e-8), (k, l, n)


@pytest.mark.slow
@pytest.mark.parametrize("order, V, which", [(0, 1.0, 0), (0, 2.0, 0), (1, 2.0, 1)])
def test_bessel_integrand_stable_under_node_doubling(order, V, which, table_params):
    integrand = monomial(2, 1, 1, jl_of(order, V, which))
    coarse = quad3d(OracleSpec(integrand, table_params, nodes_per_axis=96)).value
    fine = quad3d(OracleSpec(integrand, table_params, nodes_per_axis=192)).value
    assert fine == pytest.approx(coarse, rel=1e-8)


def test_slab_reduction_is_deterministic(table_params):
    integrand = monomial(2, 1, 3, jl_of(1, 0.8))
    serial = quad3d(OracleSpec(integrand, table_params, workers=1)).value
    threaded = quad3d(OracleSpec(integrand, table_params, workers=4)).value
    assert serial == threaded


def test_too_few_nodes_rejected(unit_params):
    with pytest.raises(IntegralDomainError, match="nodes"):
        OracleSpec(_one, unit_params, nodes_per_axis=8)


def test_strict_quadrature_raises():
    def wiggly(u1, u2, u3):
        return np.cos(40.0 * u1)

    with pytest.raises(ConvergenceError) as excinfo:
        perimetric_quad(wiggly, rates=(1.0, 1.0, 1.0), nodes=16, strict=True)
    assert excinfo.value.result is not None


# ============================================================================
# 1D RULES
# ============================================================================

def test_exponential_on_half_line():
    assert quad1d_semiinfinite(lambda x: np.exp(-x)).value == pytest.approx(1.0, rel=1e-13)


def test_scaled_decay_rate():
    result = quad1d_semiinfinite(lambda x: x * np.exp(-2.0 * x), decay_rate=2.0)
    assert result.converged
    assert result.value == pytest.approx(0.25, rel=1e-13)


def test_cosh_integral_is_k0():
    result = quad1d_semiinfinite(lambda t: np.exp(-np.cosh(t)), tol=1e-14)
    assert result.value == pytest.approx(bessel_k0(1.0, "series"), rel=1e-13)


def test_finite_interval_with_endpoint_singularity():
    result = quad1d_finite(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0)
    assert result.value == pytest.approx(2.0, rel=1e-11)


def test_reversed_interval_flips_sign():
    forward = quad1d_finite(np.sin, 0.0, math.pi).value
    backward = quad1d_finite(np.sin, math.pi, 0.0).value
    assert forward == pytest.approx(2.0, rel=1e-13)
    assert backward == -forward


def test_bad_decay_rate_rejected():
    with pytest.raises(IntegralDomainError):
        quad1d_semiinfinite(lambda x: np.exp(-x), decay_rate=0.0)
