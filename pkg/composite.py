"""
Integrals of series-defined radial functions and the shifted-cosine integral J(t)
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence, Tuple

import mpmath

from config import SERIES_Q_MAX
from core import ExpParams, IntegralResult, PowerIndices, gamma_klm
from bessel_single import (
    BesselIntegralSpec, SeriesControl, bessel0_integral, bessel1_integral, besselL_integral, sum_series,
)
from errors import IntegralDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesTerm:
    """One term A r32^n exp(-B r32) of a radial series"""
    coefficient: float
    power: int
    damping: float = 0.0

    def __post_init__(self):
        if self.power < 0:
            raise IntegralDomainError(f"series power must be non-negative, got {self.power}")
        if self.damping < 0:
            raise IntegralDomainError(f"damping exponent must be non-negative, got {self.damping}")


@dataclass(frozen=True)
class SeriesFunction:
    """Finite series f(r32) = sum_n A_n r32^n (optionally times exp(-B_n r32))"""
    terms: Tuple[SeriesTerm, ...] = field(default_factory=tuple)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple]) -> "SeriesFunction":
        """Build from (A, n) or (A, n, B) tuples"""
        return cls(tuple(SeriesTerm(*pair) for pair in pairs))


@dataclass(frozen=True)
class JSpec:
    """J(t) = int r32^k r31^l r21^n cos(sqrt(r32^2 - 2 t r32)) exp(...) dr"""
    idx: PowerIndices
    params: ExpParams
    t: float
    kappa_max: int = SERIES_Q_MAX

    def __post_init__(self):
        if self.kappa_max < 1:
            raise IntegralDomainError(f"kappa_max must be at least 1, got {self.kappa_max}")


# ============================================================================
# SERIES-DEFINED FUNCTIONS
# ============================================================================

def series_integral(f: SeriesFunction, params: ExpParams, damped: bool = False) -> IntegralResult:
    """
    Integral of f(r32) r31 r21 r32 exp(...) term by term

    damped=False gives sum_n A_n Gamma_{n+1;1;1}(alpha, beta, gamma);
    damped=True shifts alpha by each term's B_n.
    """
    values, errors = [], []
    for i, term in enumerate(f.terms):
        try:
            shifted = params.shifted(d_alpha=term.damping) if damped else params
            result = gamma_klm(PowerIndices(term.power + 1, 1, 1), shifted)
        except IntegralDomainError as exc:
            raise IntegralDomainError(f"series term {i} ({term}): {exc}") from exc
        values.append(term.coefficient * result.value)
        errors.append(abs(term.coefficient) * result.abs_error_estimate)
    return IntegralResult(math.fsum(values), math.fsum(errors), len(f.terms), True)


# ============================================================================
# COSINE MOMENT AND J(t)
# ============================================================================

def bessel_neg1_integral(idx: PowerIndices, params: ExpParams, V: float,
                         ctl: SeriesControl = SeriesControl()) -> IntegralResult:
    """
    Cosine moment int r32^(k-1) r31^l r21^n cos(V r32) exp(...) dr

    Built from cos(x) = j_0(x) - x j_1(x), so it equals
    B^(0)_{k-1;l;n}(V) - V B^(1)_{k;l;n}(V), i.e. V times the integral with
    j_{-1}(V r32). Needs k >= 1.
    """
    if idx.k < 1:
        raise IntegralDomainError(f"j_(-1) integral needs k >= 1 to cancel the 1/r32 pole, got k={idx.k}")
    if V < 0:
        raise IntegralDomainError(f"wave number V must be non-negative, got {V}")
    b0 = bessel0_integral(BesselIntegralSpec(idx.shifted(dk=-1), params, V), ctl)
    b1 = bessel1_integral(BesselIntegralSpec(idx, params, V), ctl)
    return IntegralResult(
        b0.value - V * b1.value,
        b0.abs_error_estimate + V * b1.abs_error_estimate,
        b0.terms_used + b1.terms_used,
        b0.converged and b1.converged,
    )


def _j_terms(spec: JSpec, order: int, ctl: SeriesControl, inner: list) -> Iterator:
    """t^kappa/kappa! B^(kappa+order-1)_{k+1;l;n}(V=1); inner results are collected"""
    base = spec.idx.shifted(dk=1)
    kappa = 0
    while True:
        L = kappa + order - 1
        if L < 0:
            result = bessel_neg1_integral(base, spec.params, 1.0, ctl)
        elif spec.t == 0 and kappa > 0:
            result = IntegralResult(0.0, 0.0, 0, True)
        else:
            result = besselL_integral(BesselIntegralSpec(base, spec.params, 1.0, L), ctl)
        inner.append(result)
        if ctl.extended:
            yield mpmath.mpf(spec.t) ** kappa / mpmath.factorial(kappa) * mpmath.mpf(result.value)
        else:
            yield spec.t ** kappa / math.factorial(kappa) * result.value
        kappa += 1


def j_integral_derivative(spec: JSpec, order: int,
                          ctl: SeriesControl = SeriesControl()) -> IntegralResult:
    """
    d^m J / dt^m as the shifted series sum_kappa t^kappa/kappa! B^(kappa+m-1)_{k+1;l;n}(1)

    Order 0 is J itself, whose kappa = 0 term is the cosine moment.
    """
    if order < 0:
        raise IntegralDomainError(f"derivative order must be non-negative, got {order}")
    outer = replace(ctl, q_max=min(ctl.q_max, spec.kappa_max))
    inner = []
    k, l, n = spec.idx.as_tuple()
    label = f"J^({order})_{{{k};{l};{n}}}(t={spec.t:g})"
    result = sum_series(_j_terms(spec, order, ctl, inner), outer, label)
    if not all(r.converged for r in inner):
        logger.warning("%s: %d inner Bessel series did not converge", label,
                       sum(not r.converged for r in inner))
        result = replace(result, converged=False)
    return result


def j_integral(spec: JSpec, ctl: SeriesControl = SeriesControl()) -> IntegralResult:
    """
    J(alpha, beta, gamma; t) with extra powers r32^k r31^l r21^n

    Expanded as sum_kappa t^kappa/kappa! B^(kappa-1)_{k+1;l;n}(alpha, beta, gamma; 1).
    """
    return j_integral_derivative(spec, 0, ctl)
