"""
Tests for integrals with two spherical Bessel functions
"""
import math

import numpy as np
import pytest

from bessel_double import (
    DoubleBesselSpec, convergence_radius, double_bessel_integral, product_jj_coefficients,
    product_jj_series, sin_sin_integral,
)
from bessel_single import SeriesControl, spherical_jL
from conftest import jl_of
from core import ExpParams, PowerIndices, gamma_klm
from errors import IntegralDomainError
from oracle import OracleSpec, monomial, quad3d


def _jj(L1: int, L2: int, V: float):
    first, second = jl_of(L1, V, 0), jl_of(L2, V, 1)

    def factor(r32, r31, r21):
        return first(r32, r31, r21) * second(r32, r31, r21)
    return factor


def test_zero_wave_number_gives_gamma(table_params):
    idx = PowerIndices(2, 1, 1)
    result = double_bessel_integral(DoubleBesselSpec(idx, table_params, 0.0))
    assert result.value == gamma_klm(idx, table_params).value
    assert double_bessel_integral(DoubleBesselSpec(idx, table_params, 0.0, L1=1)).value == 0.0


@pytest.mark.parametrize("powers", [(0, 0, 0), (1, 1, 1)])
@pytest.mark.parametrize("V", [0.5, 1.0])
def test_j0_j0_against_oracle(powers, V, bessel_params):
    series = double_bessel_integral(DoubleBesselSpec(PowerIndices(*powers), bessel_params, V))
    oracle = quad3d(OracleSpec(monomial(*powers, _jj(0, 0, V)), bessel_params, nodes_per_axis=48))
    assert series.converged
    assert series.value == pytest.approx(oracle.value, rel=1e-8)


def test_mixed_orders_against_oracle(bessel_params):
    V = 1.0
    series = double_bessel_integral(DoubleBesselSpec(PowerIndices(0, 0, 0), bessel_params, V, L1=0, L2=1))
    oracle = quad3d(OracleSpec(monomial(0, 0, 0, _jj(0, 1, V)), bessel_params, nodes_per_axis=48))
    assert series.value == pytest.approx(oracle.value, rel=1e-8)


def test_extended_precision_agrees(bessel_params):
    spec = DoubleBesselSpec(PowerIndices(1, 1, 1), bessel_params, 0.5, L1=1, L2=2)
    standard = double_bessel_integral(spec).value
    extended = double_bessel_integral(spec, SeriesControl(q_max=150, precision="extended")).value
    assert standard == pytest.approx(extended, rel=1e-12)


def test_convergence_radius(unit_params, bessel_params):
    assert convergence_radius(unit_params) == 1.0
    assert convergence_radius(bessel_params) == 2.0


# ============================================================================
# SIN * SIN
# ============================================================================

def test_sin_sin_equals_scaled_j0_j0(random_case, rng):
    for _ in range(10):
        idx, params = random_case()
        V = float(rng.uniform(0.1, 0.6))
        sin_sin = sin_sin_integral(idx, params, V).value
        j0_j0 = double_bessel_integral(DoubleBesselSpec(idx.shifted(dk=1, dl=1), params, V)).value
        assert sin_sin == pytest.approx(V * V * j0_j0, rel=1e-10)


def test_sin_sin_against_oracle(bessel_params):
    V = 0.5

    def factor(r32, r31, r21):
        return np.sin(V * r32) * np.sin(V * r31)

    series = sin_sin_integral(PowerIndices(0, 0, 1), bessel_params, V)
    oracle = quad3d(OracleSpec(monomial(0, 0, 1, factor), bessel_params, nodes_per_axis=48))
    assert series.value == pytest.approx(oracle.value, rel=1e-8)


def test_sin_sin_small_wave_number(table_params):
    idx, V = PowerIndices(1, 0, 1), 1e-4
    leading = gamma_klm(idx.shifted(dk=1, dl=1), table_params).value
    assert sin_sin_integral(idx, table_params, V).value / V ** 2 == pytest.approx(leading, rel=1e-6)


def test_sin_sin_needs_positive_wave_number(unit_params):
    with pytest.raises(IntegralDomainError):
        sin_sin_integral(PowerIndices(0, 0, 0), unit_params, 0.0)


# ============================================================================
# PRODUCT SERIES
# ============================================================================

def test_product_series_at_origin():
    assert product_jj_series(0, 0, 1.0, 1.0, 0.0, 0.0, 10) == 1.0


def test_product_series_matches_direct_product():
    expected = spherical_jL(0, 0.7) * spherical_jL(1, 1.3)
    assert product_jj_series(0, 1, 1.0, 1.0, 0.7, 1.3, 40) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("p", [0, 1, 5, 12])
def test_group_has_p_plus_one_terms(p):
    sign, log_c = product_jj_coefficients(2, 1, p)
    assert log_c.shape == (p + 1,)
    assert sign == (-1.0) ** p


# ============================================================================
# SYMMETRY AND CONSISTENCY
# ============================================================================

@pytest.mark.parametrize("L1, L2", [(0, 1), (1, 2), (2, 0)])
def test_swapping_both_bessel_factors(L1, L2):
    params, V = ExpParams(2.2, 1.8, 1.0), 0.8
    forward = double_bessel_integral(DoubleBesselSpec(PowerIndices(1, 0, 2), params, V, L1, L2))
    swapped = double_bessel_integral(
        DoubleBesselSpec(PowerIndices(0, 1, 2), params.permuted((1, 0, 2)), V, L2, L1))
    assert forward.converged and swapped.converged
    assert swapped.value == pytest.approx(forward.value, rel=1e-12)


def test_product_series_integrated_termwise():
    idx, params, V, L1, L2 = PowerIndices(1, 0, 1), ExpParams(2.2, 1.8, 1.0), 0.8, 1, 2
    result = double_bessel_integral(DoubleBesselSpec(idx, params, V, L1, L2))
    terms = []
    for p in range(result.terms_used):
        sign, log_c = product_jj_coefficients(L1, L2, p)
        for q, c in enumerate(log_c):
            shifted = idx.shifted(dk=L1 + 2 * q, dl=L2 + 2 * (p - q))
            terms.append(sign * math.exp(c) * V ** (L1 + L2 + 2 * p) * gamma_klm(shifted, params).value)
    assert math.fsum(terms) == pytest.approx(result.value, rel=1e-13)
