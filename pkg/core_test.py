"""
Tests for the closed-form Gamma, B and G integrals and the coordinate maps
"""
import math

import numpy as np
import pytest

from core import (
    BasicBSpec, ExpParams, PerimetricPoint, PowerIndices, RelativePoint, basic_b, basic_b_closed,
    from_perimetric, gamma_klm, gamma_klm_log, larson_a, log_term_magnitude, power_g, to_perimetric,
)
from errors import IntegralDomainError, TermOverflowError
from oracle import perimetric_quad
from tables import TABLE_I


# ============================================================================
# GAMMA
# ============================================================================

def test_gamma_zero_powers(unit_params):
    result = gamma_klm(PowerIndices(0, 0, 0), unit_params)
    assert result.value == pytest.approx(0.25, rel=1e-15)
    assert result.converged


@pytest.mark.parametrize("row", TABLE_I, ids=lambda row: f"k={row.k}")
@pytest.mark.parametrize("sign", [1.0, -1.0], ids=["gamma+", "gamma-"])
def test_gamma_reproduces_table_i(row, sign):
    published = row.positive if sign > 0 else row.negative
    result = gamma_klm(row.idx, row.params(sign * 0.567))
    assert result.value == pytest.approx(published, rel=1e-12)


def test_gamma_extended_precision_agrees(table_params):
    idx = PowerIndices(7, 2, 1)
    standard = gamma_klm(idx, table_params).value
    extended = gamma_klm(idx, table_params, precision="extended").value
    assert standard == pytest.approx(extended, rel=1e-14)


@pytest.mark.parametrize("order", [(1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)])
def test_gamma_relabelling_symmetry(order, table_params):
    idx = PowerIndices(4, 2, 1)
    reference = gamma_klm(idx, table_params).value
    relabelled = gamma_klm(idx.permuted(order), table_params.permuted(order)).value
    assert relabelled == pytest.approx(reference, rel=1e-13)


def test_gamma_relabelling_symmetry_random(random_case, rng):
    orders = [(1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    for _ in range(20):
        idx, params = random_case(4)
        order = orders[int(rng.integers(len(orders)))]
        reference = gamma_klm(idx, params).value
        relabelled = gamma_klm(idx.permuted(order), params.permuted(order)).value
        assert relabelled == pytest.approx(reference, rel=1e-14), (idx, params, order)


def test_gamma_positive_and_decreasing_in_each_exponent(random_case):
    for _ in range(20):
        idx, params = random_case()
        base = gamma_klm(idx, params).value
        assert base > 0
        for shift in ({"d_alpha": 0.05}, {"d_beta": 0.05}, {"d_gamma": 0.05}):
            assert gamma_klm(idx, params.shifted(**shift)).value < base, (idx, params, shift)


@pytest.mark.parametrize("idx, params", [
    (PowerIndices(150, 0, 0), ExpParams(100.0, 100.0, 100.0)),
    (PowerIndices(60, 50, 40), ExpParams(40.0, 35.0, 30.0)),
    (PowerIndices(60, 10, 5), ExpParams(0.3, 0.4, 0.35)),
])
def test_gamma_with_large_rates_matches_extended(idx, params):
    standard = gamma_klm(idx, params)
    extended = gamma_klm(idx, params, precision="extended")
    assert standard.value == pytest.approx(extended.value, rel=1e-12)
    assert standard.value == pytest.approx(math.exp(gamma_klm_log(idx, params)), rel=1e-12)


def test_negative_gamma_is_accepted_but_bad_pair_sum_is_not():
    ExpParams(2.35, 1.41, -0.567)
    with pytest.raises(IntegralDomainError, match="beta"):
        ExpParams(1.0, -1.5, 1.0)


def test_negative_power_rejected():
    with pytest.raises(IntegralDomainError):
        PowerIndices(-1, 0, 0)


def test_log_term_magnitude_single_term(unit_params):
    log_value, sign = log_term_magnitude(0, 0, 0, PowerIndices(0, 0, 0), unit_params)
    assert log_value == pytest.approx(math.log(0.25), rel=1e-15)
    assert sign == 1


def test_log_terms_sum_to_gamma(table_params):
    idx = PowerIndices(3, 2, 1)
    total = math.fsum(
        sign * math.exp(log_value)
        for k1 in range(4) for l1 in range(3) for n1 in range(2)
        for log_value, sign in [log_term_magnitude(k1, l1, n1, idx, table_params)]
    )
    assert total == pytest.approx(gamma_klm(idx, table_params).value, rel=1e-13)


def test_log_term_is_finite_where_factorials_overflow(unit_params):
    log_value, _ = log_term_magnitude(200, 0, 0, PowerIndices(200, 0, 0), unit_params)
    assert math.isfinite(log_value)
    assert log_value > math.log(np.finfo(float).max) / 2
    assert math.isfinite(gamma_klm_log(PowerIndices(200, 0, 0), unit_params))


def test_gamma_overflow_reports_term(unit_params):
    with pytest.raises(TermOverflowError) as excinfo:
        gamma_klm(PowerIndices(200, 0, 0), ExpParams(0.1, 0.1, 0.1))
    assert len(excinfo.value.term) == 3


def test_larson_function():
    assert larson_a(3, 2.0) == pytest.approx(6.0 / 16.0, rel=1e-15)
    with pytest.raises(IntegralDomainError):
        larson_a(1, 0.0)


# ============================================================================
# BASIC B AND POWER-TYPE G
# ============================================================================

def test_basic_b_unit_case():
    result = basic_b(BasicBSpec())
    assert result.value == pytest.approx(1.0, rel=1e-12)


def test_basic_b_closed_form_with_powers():
    spec = BasicBSpec(a=2.0, b=3.0, c=4.0, p1=1.0, p2=2.0, p3=3.0)
    expected = 1.0 * 2.0 * 6.0 / (2.0 ** 2 * 3.0 ** 3 * 4.0 ** 4)
    assert basic_b(spec).value == pytest.approx(expected, rel=1e-12)
    assert basic_b_closed(spec).value == pytest.approx(expected, rel=1e-14)


def test_basic_b_closed_form_needs_simple_denominator():
    with pytest.raises(IntegralDomainError):
        basic_b_closed(BasicBSpec(q1=1.0))


def test_basic_b_closed_form_matches_quadrature(rng):
    for _ in range(10):
        a, b, c = rng.uniform(0.5, 3.0, size=3)
        p1, p2, p3 = rng.integers(0, 5, size=3) / 2.0
        spec = BasicBSpec(float(a), float(b), float(c), float(p1), float(p2), float(p3))
        assert basic_b(spec).value == pytest.approx(basic_b_closed(spec).value, rel=1e-9)


def test_basic_b_against_perimetric_quadrature():
    spec = BasicBSpec(q0=1.0, q1=1.0, q2=1.0, q3=1.0, s=2.0)

    def f(u1, u2, u3):
        return (1.0 + u1 + u2 + u3) ** -2.0

    reference = perimetric_quad(f, rates=(spec.a, spec.b, spec.c), nodes=64)
    assert basic_b(spec).value == pytest.approx(reference.value, rel=1e-7)


def test_basic_b_divergence_detected():
    with pytest.raises(IntegralDomainError, match="diverges"):
        basic_b(BasicBSpec(q0=0.0, q1=1.0, q2=1.0, q3=1.0, s=3.0))


def test_power_g_elementary_case():
    spec = BasicBSpec(q0=1.0, q1=1.0, q2=1.0, q3=1.0, s=4.0)
    assert power_g(spec).value == pytest.approx(1.0 / 6.0, rel=1e-14)


def test_power_g_divergence_boundary():
    with pytest.raises(IntegralDomainError, match="diverges"):
        power_g(BasicBSpec(q0=1.0, q1=1.0, q2=1.0, q3=1.0, s=3.0))


@pytest.mark.slow
def test_power_g_matches_defining_integral(rng):
    for _ in range(10):
        p = rng.integers(0, 3, size=3).astype(float)
        q = rng.uniform(0.5, 2.0, size=4)
        s = float(p.sum() + 3.0 + rng.uniform(1.0, 3.0))
        spec = BasicBSpec(1.0, 1.0, 1.0, *map(float, p), *map(float, q), s)

        def f(u1, u2, u3, q=q, s=s):
            return (q[0] + q[1] * u1 + q[2] * u2 + q[3] * u3) ** -s

        reference = perimetric_quad(f, rates=None, powers=tuple(p), nodes=64, tol=1e-10)
        assert power_g(spec).value == pytest.approx(reference.value, rel=1e-9)


# ============================================================================
# COORDINATES
# ============================================================================

def test_equilateral_triangle_maps_to_unit_perimetric():
    u = to_perimetric(RelativePoint(2.0, 2.0, 2.0))
    assert (u.u1, u.u2, u.u3) == (1.0, 1.0, 1.0)


def test_degenerate_perimetric_point():
    r = from_perimetric(PerimetricPoint(0.0, 1.0, 1.0))
    assert (r.r32, r.r31, r.r21) == (2.0, 1.0, 1.0)


def test_round_trip(rng):
    for _ in range(50):
        u = PerimetricPoint(*map(float, rng.uniform(0.0, 5.0, size=3)))
        back = to_perimetric(from_perimetric(u))
        assert (back.u1, back.u2, back.u3) == pytest.approx((u.u1, u.u2, u.u3), abs=1e-14)


def test_triangle_violation():
    with pytest.raises(IntegralDomainError, match="triangle"):
        RelativePoint(1.0, 1.0, 3.0)
