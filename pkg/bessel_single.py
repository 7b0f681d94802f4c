"""
Three-body integrals with one spherical Bessel function

    B^(L)_{k;l;n}(alpha, beta, gamma; V) =
        int r32^k r31^l r21^n j_L(V r32) exp(-alpha r32 - beta r31 - gamma r21) dr

Expanding j_L in powers of its argument turns the integral into an alternating
series of Gamma_{k+L+2q; l; n} integrals. The series converges for
V < min(alpha+beta, alpha+gamma) and is practical up to V of a few units.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Tuple

import mpmath
import numpy as np

from config import (
    EXTENDED_DPS, PRECISIONS, SERIES_Q_MAX, SERIES_REL_TOL, SERIES_STALL_COUNT,
)
from core import (
    EPS, ExpParams, IntegralResult, PowerIndices, gamma_klm, gamma_klm_mp,
    log_odd_double_factorial, scaled_gamma,
)
from errors import IntegralDomainError

logger = logging.getLogger(__name__)


# ============================================================================
# SERIES CONTROL
# ============================================================================

@dataclass(frozen=True)
class SeriesControl:
    """Truncation rule shared by every series in the package

    A series stops once `stall_count` consecutive terms satisfy
    |term| <= rel_tol * max(1, |partial sum|), or after q_max terms.
    """
    rel_tol: float = SERIES_REL_TOL
    q_max: int = SERIES_Q_MAX
    stall_count: int = SERIES_STALL_COUNT
    precision: str = "standard"

    def __post_init__(self):
        if not self.rel_tol >= EPS:
            raise IntegralDomainError(f"rel_tol must be at least machine epsilon {EPS:.3g}, got {self.rel_tol}")
        if self.q_max < 1:
            raise IntegralDomainError(f"q_max must be at least 1, got {self.q_max}")
        if self.stall_count < 1:
            raise IntegralDomainError(f"stall_count must be at least 1, got {self.stall_count}")
        if self.precision not in PRECISIONS:
            raise IntegralDomainError(f"precision must be one of {PRECISIONS}, got {self.precision!r}")

    @property
    def extended(self) -> bool:
        return self.precision == "extended"


def sum_series(terms: Iterable, ctl: SeriesControl, label: str = "series") -> IntegralResult:
    """
    Sum a (possibly infinite) term stream under the SeriesControl contract

    The stream must yield mpmath numbers when ctl.precision is "extended";
    the whole summation then runs at EXTENDED_DPS digits.

    Returns:
        IntegralResult with abs_error_estimate = |first omitted term|
    """
    if ctl.extended:
        with mpmath.workdps(EXTENDED_DPS):
            return _sum_series(iter(terms), ctl, label, mpmath.fsum)
    return _sum_series(iter(terms), ctl, label, math.fsum)


def _sum_series(terms: Iterator, ctl: SeriesControl, label: str, fsum: Callable) -> IntegralResult:
    accepted = []
    partial = 0
    stalled = 0
    for term in terms:
        accepted.append(term)
        partial = fsum(accepted)
        if abs(term) <= ctl.rel_tol * max(1.0, abs(partial)):
            stalled += 1
            if stalled >= ctl.stall_count:
                break
        else:
            stalled = 0
        if len(accepted) >= ctl.q_max:
            break

    omitted = next(terms, 0)
    value = float(partial)
    err = float(abs(omitted))
    converged = stalled >= ctl.stall_count and err <= ctl.rel_tol * max(1.0, abs(value))
    if converged:
        logger.debug("%s converged after %d terms", label, len(accepted))
    else:
        logger.warning("%s not converged after %d terms (next term %.3g)", label, len(accepted), err)
    return IntegralResult(value, err, len(accepted), converged)


# ============================================================================
# DOMAIN TYPES
# ============================================================================

class BesselArgument(Enum):
    """Which inter-particle distance the Bessel function depends on"""
    R32 = "r32"
    R31 = "r31"
    R21 = "r21"


# permutation that moves the selected distance into the r32 slot
_ARGUMENT_ORDER = {
    BesselArgument.R32: (0, 1, 2),
    BesselArgument.R31: (1, 0, 2),
    BesselArgument.R21: (2, 1, 0),
}


@dataclass(frozen=True)
class BesselIntegralSpec:
    idx: PowerIndices
    params: ExpParams
    V: float
    L: int = 0

    def __post_init__(self):
        if not self.V >= 0:
            raise IntegralDomainError(f"wave number V must be non-negative, got {self.V}")
        if self.L < 0:
            raise IntegralDomainError(f"Bessel order L must be non-negative, got {self.L}")

    def with_order(self, L: int) -> "BesselIntegralSpec":
        return BesselIntegralSpec(self.idx, self.params, self.V, L)

    def with_indices(self, idx: PowerIndices) -> "BesselIntegralSpec":
        return BesselIntegralSpec(idx, self.params, self.V, self.L)


def convergence_radius(params: ExpParams) -> float:
    """Largest V for which the power series in V r32 converges"""
    return min(params.alpha + params.beta, params.alpha + params.gamma)


def _check_radius(V: float, params: ExpParams, label: str):
    radius = convergence_radius(params)
    if V >= radius:
        logger.warning("%s: V=%g is outside the convergence radius %g of the series", label, V, radius)


# ============================================================================
# SPHERICAL BESSEL FUNCTIONS
# ============================================================================

def _jl_series(L: int, x: float) -> float:
    """Power series of j_L(x), L >= 1"""
    term = math.exp(L * math.log(x) - float(log_odd_double_factorial(2 * L + 1)))
    terms = [term]
    half_x2 = 0.5 * x * x
    kappa = 0
    while abs(term) > 1e-17 * abs(math.fsum(terms)):
        kappa += 1
        term *= -half_x2 / (kappa * (2 * L + 2 * kappa + 1))
        terms.append(term)
    return math.fsum(terms)


def spherical_jL(L: int, x: float) -> float:
    """
    Spherical Bessel function j_L(x) for L >= -1 and x >= 0

    j_{-1}(x) = cos(x)/x. Closed forms cover L <= 1; higher orders use the
    power series below x = L+1 and upward recursion from j_0, j_1 above it.
    """
    if x < 0:
        raise IntegralDomainError(f"spherical_jL needs x >= 0, got {x}")
    if L < -1:
        raise IntegralDomainError(f"spherical_jL order must be >= -1, got {L}")
    if L == -1:
        if x == 0:
            raise IntegralDomainError("j_{-1}(x) = cos(x)/x diverges at x = 0")
        return math.cos(x) / x
    if L == 0:
        return 1.0 if x == 0 else math.sin(x) / x
    if x == 0:
        return 0.0
    if L == 1:
        if x < 0.25:
            return _jl_series(1, x)
        return math.sin(x) / (x * x) - math.cos(x) / x
    if x < L + 1:
        return _jl_series(L, x)

    previous, current = math.sin(x) / x, math.sin(x) / (x * x) - math.cos(x) / x
    for m in range(1, L):
        previous, current = current, (2 * m + 1) / x * current - previous
    return current


# ============================================================================
# SERIES TERMS
# ============================================================================

def _alternating_terms(idx: PowerIndices, params: ExpParams, V: float, offset: int,
                       first_power: int, first_den: int, ratio_den: Callable[[int], int],
                       extended: bool) -> Iterator:
    """
    Yield (-1)^q c_q Gamma_{k+offset+2q; l; n} where

        c_0 = V^first_power / first_den,   c_{q+1} = c_q V^2 / ratio_den(q)
    """
    if extended:
        v = mpmath.mpf(V)
        c = v ** first_power / first_den
        q = 0
        while True:
            yield (-1) ** q * c * gamma_klm_mp(idx.shifted(offset + 2 * q), params)
            c = c * v * v / ratio_den(q)
            q += 1

    log_v2 = 2.0 * math.log(V)
    log_c = first_power * math.log(V) - math.log(first_den)
    q = 0
    while True:
        sign = -1.0 if q % 2 else 1.0
        yield sign * scaled_gamma(log_c, idx.shifted(offset + 2 * q), params)
        log_c += log_v2 - math.log(ratio_den(q))
        q += 1


def _odd_double_factorial(n: int) -> int:
    return math.prod(range(1, n + 1, 2))


def _label(name: str, spec: BesselIntegralSpec) -> str:
    k, l, n = spec.idx.as_tuple()
    return f"{name}_{{{k};{l};{n}}}(V={spec.V:g})"


# ============================================================================
# B^(0), B^(1), B^(L)
# ============================================================================

def bessel0_integral(spec: BesselIntegralSpec, ctl: SeriesControl = SeriesControl()) -> IntegralResult:
    """
    Integral with j_0(V r32):  sum_q (-1)^q V^(2q)/(2q+1)! Gamma_{k+2q;l;n}

    Returns Gamma_{k;l;n} itself at V = 0.
    """
    if spec.V == 0:
        return gamma_klm(spec.idx, spec.params, ctl.precision)
    label = _label("B0", spec)
    _check_radius(spec.V, spec.params, label)
    terms = _alternating_terms(spec.idx, spec.params, spec.V, 0, 0, 1,
                               lambda q: (2 * q + 2) * (2 * q + 3), ctl.extended)
    return sum_series(terms, ctl, label)


def bessel1_integral(spec: BesselIntegralSpec, ctl: SeriesControl = SeriesControl()) -> IntegralResult:
    """
    Integral with j_1(V r32):  sum_q (-1)^q (2q+2) V^(2q+1)/(2q+3)! Gamma_{k+2q+1;l;n}

    Returns 0 at V = 0.
    """
    if spec.V == 0:
        return IntegralResult(0.0, 0.0, 0, True)
    label = _label("B1", spec)
    _check_radius(spec.V, spec.params, label)
    terms = _alternating_terms(spec.idx, spec.params, spec.V, 1, 1, 3,
                               lambda q: (2 * q + 2) * (2 * q + 5), ctl.extended)
    return sum_series(terms, ctl, label)


def besselL_integral(spec: BesselIntegralSpec, ctl: SeriesControl = SeriesControl()) -> IntegralResult:
    """
    Integral with j_L(V r32) for any L >= 0

    Args:
        spec: indices, parameters, wave number V and order L
        ctl: truncation rule and precision

    Returns:
        sum_q (-1)^q V^(L+2q) / (2^q q! (2L+2q+1)!!) Gamma_{k+L+2q;l;n}
    """
    L = spec.L
    if spec.V == 0:
        return gamma_klm(spec.idx, spec.params, ctl.precision) if L == 0 else IntegralResult(0.0, 0.0, 0, True)
    label = _label(f"B{L}", spec)
    _check_radius(spec.V, spec.params, label)
    terms = _alternating_terms(spec.idx, spec.params, spec.V, L, L, _odd_double_factorial(2 * L + 1),
                               lambda q: 2 * (q + 1) * (2 * L + 2 * q + 3), ctl.extended)
    return sum_series(terms, ctl, label)


def bessel_integral(spec: BesselIntegralSpec, ctl: SeriesControl = SeriesControl(),
                    argument: BesselArgument = BesselArgument.R32) -> IntegralResult:
    """Integral with j_L of V r32, V r31 or V r21, by relabelling the particles"""
    order = _ARGUMENT_ORDER[BesselArgument(argument)]
    permuted = BesselIntegralSpec(spec.idx.permuted(order), spec.params.permuted(order), spec.V, spec.L)
    return besselL_integral(permuted, ctl)


def recursion_residual(spec: BesselIntegralSpec, ctl: SeriesControl = SeriesControl()) -> float:
    """
    Relative residual of B^(L+1)_k = (2L+1)/V B^(L)_{k-1} - B^(L-1)_k

    Needs k >= 1, L >= 1 and V > 0.
    """
    L, V = spec.L, spec.V
    if spec.idx.k < 1 or L < 1 or V <= 0:
        raise IntegralDomainError(f"recursion check needs k >= 1, L >= 1, V > 0; got k={spec.idx.k}, L={L}, V={V}")
    upper = besselL_integral(spec.with_order(L + 1), ctl).value
    middle = besselL_integral(BesselIntegralSpec(spec.idx.shifted(dk=-1), spec.params, V, L), ctl).value
    lower = besselL_integral(spec.with_order(L - 1), ctl).value
    predicted = (2 * L + 1) / V * middle - lower
    return abs(upper - predicted) / max(abs(upper), np.finfo(float).tiny)
