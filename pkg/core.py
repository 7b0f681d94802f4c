"""
Closed-form three-body integrals over relative and perimetric coordinates

The base moment integral is

    Gamma_{k;l;n}(alpha, beta, gamma) =
        int int int r32^k r31^l r21^n exp(-alpha r32 - beta r31 - gamma r21) dr32 dr31 dr21

In perimetric coordinates (r_ij = u_i + u_j, Jacobian 2) it becomes a product
of three Laplace transforms, so it is a finite triple sum of Larson factors
A_m(X) = m! / X^(m+1).
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import mpmath
import numpy as np
from scipy.special import gammaln, logsumexp

from config import DEFAULT_TOL, EXTENDED_DPS, PRECISIONS, TRIANGLE_SLACK
from errors import IntegralDomainError, TermOverflowError

logger = logging.getLogger(__name__)

LOG_FLOAT_MAX = math.log(np.finfo(float).max)
EPS = float(np.finfo(float).eps)
LN2 = math.log(2.0)

# Exactly rounded factorials; larger arguments go through log-gamma
_FACTORIALS = np.array([float(math.factorial(i)) for i in range(171)])


# ============================================================================
# DOMAIN TYPES
# ============================================================================

@dataclass(frozen=True)
class ExpParams:
    """Non-linear parameters of exp(-alpha r32 - beta r31 - gamma r21)

    Single exponents may be negative; every pairwise sum must be positive.
    """
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name, total in (("alpha+beta", self.alpha + self.beta),
                            ("alpha+gamma", self.alpha + self.gamma),
                            ("beta+gamma", self.beta + self.gamma)):
            if not total > 0:
                raise IntegralDomainError(
                    f"{name} must be positive, got {total!r} for "
                    f"(alpha, beta, gamma)={self.as_tuple()}"
                )

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def perimetric_rates(self) -> Tuple[float, float, float]:
        """Decay rates of (u1, u2, u3)"""
        return (self.beta + self.gamma, self.alpha + self.gamma, self.alpha + self.beta)

    def shifted(self, d_alpha: float = 0.0, d_beta: float = 0.0,
                d_gamma: float = 0.0) -> "ExpParams":
        return ExpParams(self.alpha + d_alpha, self.beta + d_beta, self.gamma + d_gamma)

    def permuted(self, order: Tuple[int, int, int]) -> "ExpParams":
        """Reorder (alpha, beta, gamma); order=(1, 0, 2) swaps alpha and beta"""
        values = self.as_tuple()
        return ExpParams(*(values[i] for i in order))


@dataclass(frozen=True)
class PowerIndices:
    """Integer powers (k, l, n) of r32, r31, r21"""
    k: int
    l: int
    n: int

    def __post_init__(self):
        for name, value in (("k", self.k), ("l", self.l), ("n", self.n)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise IntegralDomainError(f"power index {name} must be a non-negative integer, got {value!r}")

    def as_tuple(self) -> Tuple[int, int, int]:
        return (int(self.k), int(self.l), int(self.n))

    def shifted(self, dk: int = 0, dl: int = 0, dn: int = 0) -> "PowerIndices":
        return PowerIndices(self.k + dk, self.l + dl, self.n + dn)

    def permuted(self, order: Tuple[int, int, int]) -> "PowerIndices":
        values = self.as_tuple()
        return PowerIndices(*(values[i] for i in order))


@dataclass(frozen=True)
class RelativePoint:
    """Inter-particle distances; they must close a triangle"""
    r32: float
    r31: float
    r21: float

    def __post_init__(self):
        sides = (self.r32, self.r31, self.r21)
        if min(sides) < 0:
            raise IntegralDomainError(f"relative coordinates must be non-negative, got {sides}")
        slack = TRIANGLE_SLACK * max(max(sides), 1.0)
        for i in range(3):
            a, b, c = sides[i], sides[(i + 1) % 3], sides[(i + 2) % 3]
            if a > b + c + slack or a < abs(b - c) - slack:
                raise IntegralDomainError(f"triangle condition violated by (r32, r31, r21)={sides}")


@dataclass(frozen=True)
class PerimetricPoint:
    u1: float
    u2: float
    u3: float

    def __post_init__(self):
        if min(self.u1, self.u2, self.u3) < 0:
            raise IntegralDomainError(
                f"perimetric coordinates must be non-negative, got {(self.u1, self.u2, self.u3)}"
            )


@dataclass(frozen=True)
class BasicBSpec:
    """Parameters of the basic integral

        B = int u1^p1 u2^p2 u3^p3 exp(-a u1 - b u2 - c u3) / (q0 + q1 u1 + q2 u2 + q3 u3)^s du
    """
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    p1: float = 0.0
    p2: float = 0.0
    p3: float = 0.0
    q0: float = 1.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0
    s: float = 1.0

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise IntegralDomainError(f"exponents a, b, c must be positive, got {(self.a, self.b, self.c)}")
        if min(self.p1, self.p2, self.p3) < 0:
            raise IntegralDomainError(f"powers p1, p2, p3 must be non-negative, got {self.powers}")
        if min(self.q0, self.q1, self.q2, self.q3) < 0:
            raise IntegralDomainError(f"denominator coefficients must be non-negative, got {self.coefficients}")
        if self.s <= 0:
            raise IntegralDomainError(f"denominator power s must be positive, got {self.s}")

    @property
    def powers(self) -> Tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)

    @property
    def coefficients(self) -> Tuple[float, float, float, float]:
        return (self.q0, self.q1, self.q2, self.q3)


@dataclass(frozen=True)
class IntegralResult:
    """Value of an integral together with its accuracy bookkeeping"""
    value: float
    abs_error_estimate: float = 0.0
    terms_used: int = 0
    converged: bool = True

    def __float__(self) -> float:
        return float(self.value)


def within_tolerance(abs_error: float, value: float, tol: float) -> bool:
    """Relative acceptance test used by every series and quadrature"""
    return abs_error == 0.0 or abs_error <= tol * abs(value)


def check_precision(precision: str):
    if precision not in PRECISIONS:
        raise IntegralDomainError(f"precision must be one of {PRECISIONS}, got {precision!r}")


# ============================================================================
# LOG-SPACE BUILDING BLOCKS
# ============================================================================

def log_binomial(n, m):
    """log C(n, m); works elementwise on arrays"""
    return gammaln(np.add(n, 1)) - gammaln(np.add(m, 1)) - gammaln(np.subtract(n, m) + 1)


def log_odd_double_factorial(n):
    """log n!! for odd n >= 1"""
    m = (np.asarray(n) - 1) // 2
    return gammaln(np.asarray(n) + 1) - m * LN2 - gammaln(m + 1)


def larson_a(n: float, x: float) -> float:
    """Larson function A_n(X) = n! / X^(n+1)"""
    if n < 0:
        raise IntegralDomainError(f"Larson index must be non-negative, got {n}")
    if not x > 0:
        raise IntegralDomainError(f"Larson argument must be positive, got {x}")
    log_value = float(gammaln(n + 1.0)) - (n + 1.0) * math.log(x)
    if log_value > LOG_FLOAT_MAX:
        raise TermOverflowError(f"A_{n}({x}) overflows (log-magnitude {log_value:.1f})", (n,))
    return math.exp(log_value)


def _exponent_grids(idx: PowerIndices):
    """Powers of u3, u2, u1 carried by each (k1, l1, n1) summand"""
    k, l, n = idx.as_tuple()
    k1 = np.arange(k + 1)[:, None, None]
    l1 = np.arange(l + 1)[None, :, None]
    n1 = np.arange(n + 1)[None, None, :]
    m3 = l - l1 + k1   # u3, rate alpha+beta
    m2 = k - k1 + n1   # u2, rate alpha+gamma
    m1 = n - n1 + l1   # u1, rate beta+gamma
    return (k1, l1, n1), (m1, m2, m3)


def _log_terms(idx: PowerIndices, p: ExpParams) -> np.ndarray:
    k, l, n = idx.as_tuple()
    (k1, l1, n1), (m1, m2, m3) = _exponent_grids(idx)
    r1, r2, r3 = (math.log(r) for r in p.perimetric_rates())
    return (LN2
            + log_binomial(k, k1) + log_binomial(l, l1) + log_binomial(n, n1)
            + gammaln(m3 + 1) - (m3 + 1) * r3
            + gammaln(m2 + 1) - (m2 + 1) * r2
            + gammaln(m1 + 1) - (m1 + 1) * r1)


def _direct_terms(idx: PowerIndices, p: ExpParams) -> np.ndarray:
    """Summands as plain products of binomials and Larson factors"""
    k, l, n = idx.as_tuple()
    (k1, l1, n1), (m1, m2, m3) = _exponent_grids(idx)
    f = _FACTORIALS
    binomials = (f[k] / (f[k1] * f[k - k1])) * (f[l] / (f[l1] * f[l - l1])) * (f[n] / (f[n1] * f[n - n1]))
    x1, x2, x3 = p.perimetric_rates()
    larson = (f[m1] / np.power(x1, m1 + 1)) * (f[m2] / np.power(x2, m2 + 1)) * (f[m3] / np.power(x3, m3 + 1))
    return 2.0 * binomials * larson


def _direct_is_safe(idx: PowerIndices, p: ExpParams) -> bool:
    """True when no partial product of a direct summand leaves float range"""
    k, l, n = idx.as_tuple()
    (k1, l1, n1), (m1, m2, m3) = _exponent_grids(idx)
    r1, r2, r3 = (abs(math.log(r)) for r in p.perimetric_rates())
    bound = (LN2
             + log_binomial(k, k1) + log_binomial(l, l1) + log_binomial(n, n1)
             + gammaln(m1 + 1) + (m1 + 1) * r1
             + gammaln(m2 + 1) + (m2 + 1) * r2
             + gammaln(m3 + 1) + (m3 + 1) * r3)
    return float(np.max(bound)) < LOG_FLOAT_MAX - 2.0


def log_term_magnitude(k1: int, l1: int, n1: int, idx: PowerIndices,
                       p: ExpParams) -> Tuple[float, int]:
    """Log-magnitude and sign of one summand of the Gamma_{k;l;n} sum"""
    k, l, n = idx.as_tuple()
    if not (0 <= k1 <= k and 0 <= l1 <= l and 0 <= n1 <= n):
        raise IntegralDomainError(f"term (k1,l1,n1)=({k1},{l1},{n1}) outside the range of {idx.as_tuple()}")
    x1, x2, x3 = p.perimetric_rates()
    m3, m2, m1 = l - l1 + k1, k - k1 + n1, n - n1 + l1
    log_value = (LN2
                 + float(log_binomial(k, k1) + log_binomial(l, l1) + log_binomial(n, n1))
                 + math.lgamma(m3 + 1) - (m3 + 1) * math.log(x3)
                 + math.lgamma(m2 + 1) - (m2 + 1) * math.log(x2)
                 + math.lgamma(m1 + 1) - (m1 + 1) * math.log(x1))
    # positive pairwise sums make every summand positive
    return log_value, 1


# ============================================================================
# GAMMA_{k;l;n}
# ============================================================================

def gamma_klm_mp(idx: PowerIndices, p: ExpParams) -> mpmath.mpf:
    """Gamma_{k;l;n} in mpmath arithmetic; call inside mpmath.workdps()"""
    k, l, n = idx.as_tuple()
    x1, x2, x3 = (mpmath.mpf(p.beta) + mpmath.mpf(p.gamma),
                  mpmath.mpf(p.alpha) + mpmath.mpf(p.gamma),
                  mpmath.mpf(p.alpha) + mpmath.mpf(p.beta))
    terms = []
    for k1 in range(k + 1):
        for l1 in range(l + 1):
            for n1 in range(n + 1):
                m3, m2, m1 = l - l1 + k1, k - k1 + n1, n - n1 + l1
                terms.append(
                    mpmath.binomial(k, k1) * mpmath.binomial(l, l1) * mpmath.binomial(n, n1)
                    * mpmath.factorial(m3) / x3 ** (m3 + 1)
                    * mpmath.factorial(m2) / x2 ** (m2 + 1)
                    * mpmath.factorial(m1) / x1 ** (m1 + 1)
                )
    return 2 * mpmath.fsum(terms)


def gamma_klm(idx: PowerIndices, p: ExpParams, precision: str = "standard") -> IntegralResult:
    """
    Closed-form Gamma_{k;l;n}(alpha, beta, gamma)

    Args:
        idx: powers (k, l, n) of r32, r31, r21
        p: non-linear parameters
        precision: "standard" (float) or "extended" (mpmath accumulator)

    Returns:
        IntegralResult with terms_used = (k+1)(l+1)(n+1); the sum is finite
        so the result is always converged.
    """
    check_precision(precision)
    k, l, n = idx.as_tuple()
    count = (k + 1) * (l + 1) * (n + 1)

    if precision == "extended":
        with mpmath.workdps(EXTENDED_DPS):
            value = float(gamma_klm_mp(idx, p))
        if math.isinf(value):
            raise TermOverflowError(f"Gamma_{{{k};{l};{n}}} exceeds float range", (k, l, n))
        return IntegralResult(value, EPS * abs(value), count, True)

    logs = _log_terms(idx, p)
    peak = float(logs.max())
    if peak > LOG_FLOAT_MAX:
        where = tuple(int(i) for i in np.unravel_index(int(np.argmax(logs)), logs.shape))
        raise TermOverflowError(
            f"Gamma_{{{k};{l};{n}}} summand (k1,l1,n1)={where} has log-magnitude "
            f"{peak:.1f}, beyond float range", where
        )

    if k + l + n <= 170 and _direct_is_safe(idx, p):
        terms = _direct_terms(idx, p)
        spread = 1.0
    else:
        terms = np.exp(logs)
        spread = max(1.0, abs(peak))

    try:
        value = math.fsum(terms.ravel())
    except OverflowError:
        raise TermOverflowError(f"Gamma_{{{k};{l};{n}}} sum exceeds float range", (k, l, n))
    return IntegralResult(value, 4.0 * EPS * spread * value, count, True)


@lru_cache(maxsize=8192)
def gamma_klm_log(idx: PowerIndices, p: ExpParams) -> float:
    """log Gamma_{k;l;n}; finite even where Gamma itself overflows"""
    return float(logsumexp(_log_terms(idx, p)))


@lru_cache(maxsize=8192)
def _gamma_value(idx: PowerIndices, p: ExpParams) -> float:
    return gamma_klm(idx, p).value


def scaled_gamma(log_coef: float, idx: PowerIndices, p: ExpParams) -> float:
    """exp(log_coef) * Gamma_{k;l;n} without forming out-of-range intermediates"""
    log_gamma = gamma_klm_log(idx, p)
    if abs(log_coef) < 600.0 and log_gamma < 600.0:
        return math.exp(log_coef) * _gamma_value(idx, p)
    return math.exp(log_coef + log_gamma)


# ============================================================================
# BASIC B AND POWER-TYPE G INTEGRALS
# ============================================================================

def basic_b(spec: BasicBSpec, tol: float = DEFAULT_TOL) -> IntegralResult:
    """
    Basic three-body integral in perimetric coordinates via its 1D reduction

        B = G(p1+1)G(p2+1)G(p3+1)/G(s) *
            int_0^inf exp(-q0 x) x^(s-1) / ((a+q1 x)^(p1+1) (b+q2 x)^(p2+1) (c+q3 x)^(p3+1)) dx
    """
    from oracle import quad1d_semiinfinite

    s = spec.s
    q0, q1, q2, q3 = spec.coefficients
    p1, p2, p3 = spec.powers
    if q0 == 0 and (min(q1, q2, q3) == 0 or s >= p1 + p2 + p3 + 3):
        raise IntegralDomainError(f"B integral diverges for q0=0 with q={spec.coefficients}, s={s}")

    log_prefactor = float(gammaln(p1 + 1) + gammaln(p2 + 1) + gammaln(p3 + 1) - gammaln(s))

    def integrand(x):
        return np.exp(
            (s - 1.0) * np.log(x) - q0 * x + log_prefactor
            - (p1 + 1.0) * np.log(spec.a + q1 * x)
            - (p2 + 1.0) * np.log(spec.b + q2 * x)
            - (p3 + 1.0) * np.log(spec.c + q3 * x)
        )

    result = quad1d_semiinfinite(integrand, decay_rate=q0 if q0 > 0 else 1.0, tol=tol)
    if not result.converged:
        logger.warning("basic B quadrature did not reach tol=%g (estimate %g)", tol, result.abs_error_estimate)
    return result


def basic_b_closed(spec: BasicBSpec) -> IntegralResult:
    """Closed form of B at q=(1,0,0,0), s=1; powers may be non-integer"""
    if spec.coefficients != (1.0, 0.0, 0.0, 0.0) or spec.s != 1.0:
        raise IntegralDomainError(
            f"closed form needs q=(1,0,0,0), s=1, got q={spec.coefficients}, s={spec.s}"
        )
    log_value = sum(
        float(gammaln(p + 1.0)) - (p + 1.0) * math.log(x)
        for p, x in zip(spec.powers, (spec.a, spec.b, spec.c))
    )
    if log_value > LOG_FLOAT_MAX:
        raise TermOverflowError(f"B closed form overflows (log-magnitude {log_value:.1f})", spec.powers)
    value = math.exp(log_value)
    return IntegralResult(value, 4.0 * EPS * max(1.0, abs(log_value)) * value, 1, True)


def power_g(spec: BasicBSpec) -> IntegralResult:
    """Closed form of the power-type integral G (B without the exponential)"""
    q0, q1, q2, q3 = spec.coefficients
    p1, p2, p3 = spec.powers
    excess = spec.s - p1 - p2 - p3 - 3.0
    if excess <= 0:
        raise IntegralDomainError(
            f"G integral diverges: need s > p1+p2+p3+3, got s={spec.s}, powers={spec.powers}"
        )
    if min(q0, q1, q2, q3) <= 0:
        raise IntegralDomainError(f"G integral needs all q positive, got {spec.coefficients}")
    log_value = (float(gammaln(p1 + 1) + gammaln(p2 + 1) + gammaln(p3 + 1))
                 + float(gammaln(excess)) - float(gammaln(spec.s))
                 - (p1 + 1) * math.log(q1) - (p2 + 1) * math.log(q2) - (p3 + 1) * math.log(q3)
                 - excess * math.log(q0))
    value = math.exp(log_value)
    return IntegralResult(value, 4.0 * EPS * max(1.0, abs(log_value)) * value, 1, True)


# ============================================================================
# COORDINATE TRANSFORMS
# ============================================================================

def to_perimetric(r: RelativePoint) -> PerimetricPoint:
    """u1 = (r31+r21-r32)/2, u2 = (r21+r32-r31)/2, u3 = (r32+r31-r21)/2"""
    # clamp the rounding-level negatives that the triangle slack lets through
    return PerimetricPoint(
        max(0.0, 0.5 * (r.r31 + r.r21 - r.r32)),
        max(0.0, 0.5 * (r.r21 + r.r32 - r.r31)),
        max(0.0, 0.5 * (r.r32 + r.r31 - r.r21)),
    )


def from_perimetric(u: PerimetricPoint) -> RelativePoint:
    """r_ij = u_i + u_j"""
    return RelativePoint(u.u2 + u.u3, u.u1 + u.u3, u.u1 + u.u2)
