"""
Three-body integrals with two spherical Bessel functions

    B^(L1 L2)_{k;l;n}(V) = int r32^k r31^l r21^n j_L1(V r32) j_L2(V r31) exp(...) dr

The product j_L1(a x) j_L2(b y) is expanded as a double power series; with
a = b = V the p-th group of terms carries V^(L1+L2+2p) and p+1 Gamma integrals
whose coefficients share the sign (-1)^p.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import mpmath
import numpy as np
from scipy.special import gammaln

from config import SERIES_P_MAX
from core import (
    LN2, ExpParams, IntegralResult, PowerIndices, gamma_klm, gamma_klm_mp,
    log_binomial, log_odd_double_factorial, scaled_gamma,
)
from bessel_single import SeriesControl, sum_series
from errors import IntegralDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DoubleBesselSpec:
    """Indices, parameters and orders of j_L1(V r32) j_L2(V r31)"""
    idx: PowerIndices
    params: ExpParams
    V: float
    L1: int = 0
    L2: int = 0

    def __post_init__(self):
        if not self.V >= 0:
            raise IntegralDomainError(f"wave number V must be non-negative, got {self.V}")
        if self.L1 < 0 or self.L2 < 0:
            raise IntegralDomainError(f"Bessel orders must be non-negative, got L1={self.L1}, L2={self.L2}")


def default_control() -> SeriesControl:
    return SeriesControl(q_max=SERIES_P_MAX)


def convergence_radius(params: ExpParams) -> float:
    """Largest V for which the double series in V r32, V r31 converges"""
    return min(0.5 * (params.alpha + params.beta), params.alpha + params.gamma, params.beta + params.gamma)


def _check_radius(V: float, params: ExpParams, label: str):
    radius = convergence_radius(params)
    if V >= radius:
        logger.warning("%s: V=%g is outside the convergence radius %g of the double series", label, V, radius)


# ============================================================================
# PRODUCT OF TWO SPHERICAL BESSEL FUNCTIONS
# ============================================================================

def product_jj_coefficients(L1: int, L2: int, p: int) -> Tuple[float, np.ndarray]:
    """
    Sign and log-magnitudes of the p+1 coefficients of group p

    Group p of j_L1(X) j_L2(Y) is

        sign * sum_q exp(log_c[q]) X^(L1+2q) Y^(L2+2p-2q)
    """
    q = np.arange(p + 1)
    log_c = -(p * LN2 + gammaln(q + 1) + gammaln(p - q + 1)
              + log_odd_double_factorial(2 * L1 + 2 * q + 1)
              + log_odd_double_factorial(2 * L2 + 2 * (p - q) + 1))
    return (-1.0 if p % 2 else 1.0), np.asarray(log_c, dtype=float)


def _log_power(base: float, exponents: np.ndarray) -> np.ndarray:
    if base == 0:
        return np.where(exponents == 0, 0.0, -np.inf)
    return exponents * math.log(base)


def product_jj_series(L1: int, L2: int, a: float, b: float, x: float, y: float,
                      p_max: int = SERIES_P_MAX) -> float:
    """Truncated double series for j_L1(a x) j_L2(b y), groups p = 0..p_max"""
    if min(x, y) < 0:
        raise IntegralDomainError(f"product_jj_series needs x, y >= 0, got x={x}, y={y}")
    ax, by = abs(a * x), abs(b * y)
    terms = []
    for p in range(p_max + 1):
        sign, log_c = product_jj_coefficients(L1, L2, p)
        q = np.arange(p + 1)
        with np.errstate(divide="ignore"):
            logs = log_c + _log_power(ax, L1 + 2 * q) + _log_power(by, L2 + 2 * (p - q))
        terms.extend(sign * np.exp(logs))
    # odd orders flip sign with a negative argument
    parity = (1.0 if a * x >= 0 or L1 % 2 == 0 else -1.0) * (1.0 if b * y >= 0 or L2 % 2 == 0 else -1.0)
    return parity * math.fsum(terms)


# ============================================================================
# INTEGRALS
# ============================================================================

def _double_bessel_terms(spec: DoubleBesselSpec, extended: bool) -> Iterator:
    L1, L2, V = spec.L1, spec.L2, spec.V
    p = 0
    while True:
        q = range(p + 1)
        shifted = [spec.idx.shifted(dk=L1 + 2 * i, dl=L2 + 2 * (p - i)) for i in q]
        if extended:
            v = mpmath.mpf(V)
            group = mpmath.fsum(
                v ** (L1 + L2 + 2 * p) * gamma_klm_mp(s, spec.params)
                / (mpmath.mpf(2) ** p * mpmath.factorial(i) * mpmath.factorial(p - i)
                   * mpmath.fac2(2 * L1 + 2 * i + 1) * mpmath.fac2(2 * L2 + 2 * (p - i) + 1))
                for i, s in zip(q, shifted)
            )
            yield (-1) ** p * group
        else:
            sign, log_c = product_jj_coefficients(L1, L2, p)
            log_v = (L1 + L2 + 2 * p) * math.log(V)
            yield sign * math.fsum(scaled_gamma(float(c) + log_v, s, spec.params) for c, s in zip(log_c, shifted))
        p += 1


def double_bessel_integral(spec: DoubleBesselSpec, ctl: Optional[SeriesControl] = None) -> IntegralResult:
    """
    Integral with j_L1(V r32) j_L2(V r31)

    Args:
        spec: indices, parameters, V and the two orders
        ctl: truncation rule; q_max caps the number of p-groups (default p_max)

    Returns:
        IntegralResult; at V = 0 the plain Gamma_{k;l;n} when L1 = L2 = 0, else 0
    """
    ctl = ctl or default_control()
    if spec.V == 0:
        if spec.L1 == 0 and spec.L2 == 0:
            return gamma_klm(spec.idx, spec.params, ctl.precision)
        return IntegralResult(0.0, 0.0, 0, True)
    k, l, n = spec.idx.as_tuple()
    label = f"B{spec.L1}{spec.L2}_{{{k};{l};{n}}}(V={spec.V:g})"
    _check_radius(spec.V, spec.params, label)
    return sum_series(_double_bessel_terms(spec, ctl.extended), ctl, label)


def _sin_sin_terms(idx: PowerIndices, params: ExpParams, V: float, extended: bool) -> Iterator:
    kappa = 0
    while True:
        shifted = [idx.shifted(dk=2 * mu + 1, dl=2 * kappa - 2 * mu + 1) for mu in range(kappa + 1)]
        if extended:
            v = mpmath.mpf(V)
            scale = v ** (2 * kappa + 2) / mpmath.factorial(2 * kappa + 2)
            group = mpmath.fsum(mpmath.binomial(2 * kappa + 2, 2 * mu + 1) * gamma_klm_mp(s, params)
                                for mu, s in enumerate(shifted))
            yield (-1) ** kappa * scale * group
        else:
            log_scale = (2 * kappa + 2) * math.log(V) - float(gammaln(2 * kappa + 3))
            group = math.fsum(
                scaled_gamma(log_scale + float(log_binomial(2 * kappa + 2, 2 * mu + 1)), s, params)
                for mu, s in enumerate(shifted)
            )
            yield (-1.0 if kappa % 2 else 1.0) * group
        kappa += 1


def sin_sin_integral(idx: PowerIndices, params: ExpParams, V: float,
                     ctl: Optional[SeriesControl] = None) -> IntegralResult:
    """
    Integral of r32^k r31^l r21^n sin(V r32) sin(V r31) exp(...)

    Expanded as sum_kappa (-1)^kappa V^(2kappa+2)/(2kappa+2)! *
    sum_mu C(2kappa+2, 2mu+1) Gamma_{k+2mu+1; l+2kappa-2mu+1; n}.
    """
    if not V > 0:
        raise IntegralDomainError(f"sin_sin_integral needs V > 0, got {V}")
    ctl = ctl or default_control()
    k, l, n = idx.as_tuple()
    label = f"sin-sin_{{{k};{l};{n}}}(V={V:g})"
    _check_radius(V, params, label)
    return sum_series(_sin_sin_terms(idx, params, V, ctl.extended), ctl, label)
