"""
Tests for the single spherical-Bessel integrals and j_L itself
"""
import math

import pytest
from scipy.special import spherical_jn

from bessel_single import (
    BesselArgument, BesselIntegralSpec, SeriesControl, bessel0_integral, bessel1_integral,
    bessel_integral, besselL_integral, recursion_residual, spherical_jL, sum_series,
)
from conftest import jl_of
from core import PowerIndices, gamma_klm
from errors import IntegralDomainError
from oracle import OracleSpec, monomial, quad3d
from tables import TABLE_II


def _control(row):
    return SeriesControl(q_max=row.q_max)


# ============================================================================
# TABLE II
# ============================================================================

@pytest.mark.parametrize("row", [r for r in TABLE_II if not r.suspect], ids=lambda r: f"k={r.k},V={r.V}")
def test_table_ii_rows(row):
    spec = BesselIntegralSpec(row.idx, row.params, row.V)
    b0 = bessel0_integral(spec, _control(row))
    b1 = bessel1_integral(spec, _control(row))
    assert b0.value == pytest.approx(row.b0, rel=1e-11)
    assert b1.value == pytest.approx(row.b1, rel=1e-11)
    assert b0.converged and b1.converged
    assert max(b0.terms_used, b1.terms_used) <= (30 if row.V <= 1.0 else 75)


def test_duplicated_table_ii_rows_match_exactly_one_wave_number():
    low, high = [r for r in TABLE_II if r.suspect]
    matches = []
    for row in (low, high):
        spec = BesselIntegralSpec(row.idx, row.params, row.V)
        b0 = bessel0_integral(spec, _control(row)).value
        b1 = bessel1_integral(spec, _control(row)).value
        matches.append(math.isclose(b0, row.b0, rel_tol=1e-11) and math.isclose(b1, row.b1, rel_tol=1e-11))
    assert sum(matches) == 1


def test_zero_wave_number(table_params):
    idx = PowerIndices(3, 2, 1)
    spec = BesselIntegralSpec(idx, table_params, 0.0)
    assert bessel0_integral(spec).value == gamma_klm(idx, table_params).value
    assert bessel1_integral(spec).value == 0.0


def test_extended_precision_agrees(table_params):
    spec = BesselIntegralSpec(PowerIndices(5, 2, 1), table_params, 0.5)
    standard = bessel0_integral(spec).value
    extended = bessel0_integral(spec, SeriesControl(precision="extended")).value
    assert standard == pytest.approx(extended, rel=1e-13)


# ============================================================================
# GENERAL ORDER
# ============================================================================

def test_order_zero_reduces_to_b0(random_case, rng):
    for _ in range(10):
        idx, params = random_case()
        V = float(rng.uniform(0.1, 1.5))
        spec = BesselIntegralSpec(idx, params, V)
        assert besselL_integral(spec).value == pytest.approx(bessel0_integral(spec).value, rel=1e-13)


def test_order_one_reduces_to_b1(table_params):
    spec = BesselIntegralSpec(PowerIndices(3, 2, 1), table_params, 0.75, L=1)
    assert besselL_integral(spec).value == pytest.approx(bessel1_integral(spec).value, rel=1e-13)


def test_small_wave_number_leading_order(table_params):
    L, V = 2, 1e-4
    idx = PowerIndices(1, 2, 1)
    result = besselL_integral(BesselIntegralSpec(idx, table_params, V, L)).value
    leading = gamma_klm(idx.shifted(dk=L), table_params).value / 15.0
    assert result / V ** L == pytest.approx(leading, rel=1e-6)


def test_order_two_against_oracle(unit_params):
    V = 0.5
    series = besselL_integral(BesselIntegralSpec(PowerIndices(0, 0, 0), unit_params, V, L=2))
    oracle = quad3d(OracleSpec(monomial(0, 0, 0, jl_of(2, V)), unit_params, nodes_per_axis=48))
    assert series.value == pytest.approx(oracle.value, rel=1e-8)


@pytest.mark.parametrize("argument, which", [(BesselArgument.R31, 1), (BesselArgument.R21, 2)])
def test_argument_selection_against_oracle(argument, which, bessel_params):
    idx, V = PowerIndices(1, 2, 1), 0.6
    series = bessel_integral(BesselIntegralSpec(idx, bessel_params, V, L=1), argument=argument)
    oracle = quad3d(OracleSpec(monomial(*idx.as_tuple(), jl_of(1, V, which)), bessel_params, nodes_per_axis=48))
    assert series.value == pytest.approx(oracle.value, rel=1e-8)


@pytest.mark.parametrize("L", [1, 2, 3])
@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("V", [0.5, 1.0])
def test_recursion_between_orders(L, k, V, table_params):
    spec = BesselIntegralSpec(PowerIndices(k, 2, 1), table_params, V, L)
    assert recursion_residual(spec) <= 1e-10


def test_recursion_needs_positive_order(table_params):
    with pytest.raises(IntegralDomainError):
        recursion_residual(BesselIntegralSpec(PowerIndices(2, 2, 1), table_params, 0.5, L=0))


# ============================================================================
# SERIES CONTRACT
# ============================================================================

def test_truncated_series_is_flagged(table_params):
    spec = BesselIntegralSpec(PowerIndices(5, 2, 1), table_params, 2.0)
    result = bessel0_integral(spec, SeriesControl(q_max=3))
    assert not result.converged
    assert result.terms_used == 3
    assert result.abs_error_estimate > 0


def test_sum_series_stops_on_stalled_terms():
    result = sum_series((0.5 ** i for i in range(1000)), SeriesControl())
    assert result.converged
    assert result.value == pytest.approx(2.0, rel=1e-15)
    assert result.terms_used < 100


def test_stall_rule_uses_unit_scale_for_small_sums():
    result = sum_series((1e-3 * 0.1 ** i for i in range(1000)), SeriesControl(rel_tol=1e-12))
    assert result.converged
    assert result.terms_used <= 13
    assert result.abs_error_estimate <= 1e-12


def test_control_rejects_sub_epsilon_tolerance():
    with pytest.raises(IntegralDomainError, match="epsilon"):
        SeriesControl(rel_tol=1e-20)


def test_negative_wave_number_rejected(unit_params):
    with pytest.raises(IntegralDomainError):
        BesselIntegralSpec(PowerIndices(0, 0, 0), unit_params, -1.0)


# ============================================================================
# SPHERICAL BESSEL FUNCTIONS
# ============================================================================

def test_j0_zero_at_pi():
    assert spherical_jL(0, math.pi) == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_j1_closed_form(x):
    expected = math.sin(x) / x ** 2 - math.cos(x) / x
    assert spherical_jL(1, x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("L", range(2, 11))
@pytest.mark.parametrize("x", [0.05, 0.7, 2.0, 4.5, 12.0, 30.0])
def test_higher_orders_match_scipy(L, x):
    assert spherical_jL(L, x) == pytest.approx(float(spherical_jn(L, x)), rel=1e-10, abs=1e-300)


def test_order_minus_one_is_cosine_over_x():
    assert spherical_jL(-1, 0.8) == pytest.approx(math.cos(0.8) / 0.8, rel=1e-15)
    with pytest.raises(IntegralDomainError):
        spherical_jL(-1, 0.0)
