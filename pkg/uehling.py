"""
Uehling (vacuum polarization) potential and Yukawa-type matrix elements

The Uehling potential of a point charge Q is

    U(r) = (2 alpha Q / 3 pi r) int_1^inf exp(-2 b r xi) (1 + 1/(2 xi^2)) sqrt(xi^2 - 1) / xi^2 dxi

with b = 1/alpha in atomic units. Its three-body matrix element reduces to a
single xi-integral over closed-form kernels that are Gamma_{1;1;0}-type
integrals with one shifted exponent.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import psi

from config import (
    FINE_STRUCTURE, K0_SERIES_MAX_Z, KI_TOL, XI_MAPPINGS, XI_MIN_NODES, XI_NODE_COUNT, XI_TOL,
    DE_T_MAX_FINITE, DE_T_MAX_HALF_LINE,
)
from core import ExpParams, IntegralResult, PowerIndices, gamma_klm, within_tolerance
from errors import IntegralDomainError
from oracle import exp_sinh_rule, quad1d_semiinfinite, tanh_sinh_rule

logger = logging.getLogger(__name__)

PAIRS = (21, 31, 32)

# pair -> (power indices, which exponent the Yukawa range shifts)
_YUKAWA = {
    32: ((0, 1, 1), "alpha"),
    31: ((1, 0, 1), "beta"),
    21: ((1, 1, 0), "gamma"),
}

KI_FORM = "ki_form"
INTEGRAL = "integral"


@dataclass(frozen=True)
class UehlingSystem:
    """Particle charges (atomic units) and the fine-structure constant"""
    q1: float
    q2: float
    q3: float
    fine_structure: float = FINE_STRUCTURE
    nuclear_charge: float = 1.0

    def __post_init__(self):
        if not self.fine_structure > 0:
            raise IntegralDomainError(f"fine_structure must be positive, got {self.fine_structure}")

    @property
    def b(self) -> float:
        """Uehling length scale 1/alpha (inverse length in atomic units)"""
        return 1.0 / self.fine_structure

    def pair_charge(self, pair: int) -> float:
        charges = {21: self.q2 * self.q1, 31: self.q3 * self.q1, 32: self.q3 * self.q2}
        return charges[_check_pair(pair)]


@dataclass(frozen=True)
class XiQuadSpec:
    """Quadrature of the xi-integral

    mapping "inverse" substitutes xi = 1/u and uses tanh-sinh on (0, 1);
    "shift" substitutes xi = 1 + x and uses exp-sinh on (0, inf).
    """
    node_count: int = XI_NODE_COUNT
    mapping: str = "inverse"
    tol: float = XI_TOL

    def __post_init__(self):
        if self.node_count < XI_MIN_NODES:
            raise IntegralDomainError(f"node_count must be at least {XI_MIN_NODES}, got {self.node_count}")
        if self.mapping not in XI_MAPPINGS:
            raise IntegralDomainError(f"mapping must be one of {XI_MAPPINGS}, got {self.mapping!r}")


def _check_pair(pair: int) -> int:
    if pair not in PAIRS:
        raise IntegralDomainError(f"pair must be one of {PAIRS}, got {pair!r}")
    return pair


# ============================================================================
# YUKAWA AND KERNELS
# ============================================================================

def yukawa_matrix_element(params: ExpParams, mu: float, V0: float, pair: int = 32) -> IntegralResult:
    """
    Matrix element of V0 exp(-mu r_ij)/r_ij between exponential basis functions

    Pair 32 gives V0 Gamma_{0;1;1}(alpha+mu, beta, gamma); pairs 31 and 21
    shift beta and gamma instead.
    """
    if mu < 0:
        raise IntegralDomainError(f"Yukawa range mu must be non-negative, got {mu}")
    powers, exponent = _YUKAWA[_check_pair(pair)]
    shifted = params.shifted(**{f"d_{exponent}": mu})
    result = gamma_klm(PowerIndices(*powers), shifted)
    return IntegralResult(V0 * result.value, abs(V0) * result.abs_error_estimate,
                          result.terms_used, result.converged)


def _kernel_sums(pair: int, params: ExpParams, shift):
    """(A, B, C): the unshifted pair sum and the two shifted ones"""
    a, b, g = params.alpha, params.beta, params.gamma
    if pair == 21:
        return a + b, a + g + shift, b + g + shift
    if pair == 31:
        return a + g, a + b + shift, b + g + shift
    return b + g, a + b + shift, a + g + shift


def _kernel(pair: int, params: ExpParams, shift):
    A, B, C = _kernel_sums(pair, params, shift)
    return 2.0 / (A * B * C) * (2.0 / (A * A) + 1.0 / (C * A) + 1.0 / (B * A) + 1.0 / (C * B))


def ubar_kernel(pair: int, params: ExpParams, shift: float) -> float:
    """
    Matrix element U-bar_ij(shift) = int r32 r31 r21 exp(-shift r_ij)/r_ij exp(...) dr

    This is the pair-ij part of the Uehling matrix element at a fixed xi
    (shift = 2 b xi), not a potential. For pair 21 it equals
    Gamma_{1;1;0}(alpha, beta, gamma + shift); the other pairs follow by
    cyclic permutation of (alpha, beta, gamma).
    """
    _check_pair(pair)
    if shift < 0:
        raise IntegralDomainError(f"kernel shift must be non-negative, got {shift}")
    sums = _kernel_sums(pair, params, shift)
    if min(sums) <= 0:
        raise IntegralDomainError(f"pair {pair} kernel needs positive pair sums, got {sums} at shift {shift}")
    return float(_kernel(pair, params, shift))


# ============================================================================
# UEHLING MATRIX ELEMENT
# ============================================================================

def _xi_rule(quad: XiQuadSpec, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes xi and weights with the xi-weight and Jacobian folded in"""
    if quad.mapping == "inverse":
        h = 2.0 * DE_T_MAX_FINITE / (nodes - 1)
        u, w = tanh_sinh_rule(h, DE_T_MAX_FINITE)
        xi = 1.0 / u
        # dxi = du/u^2 and sqrt(xi^2-1)/xi^2 = u sqrt(1-u^2)
        folded = w * (1.0 + 0.5 * u * u) * np.sqrt((1.0 - u) * (1.0 + u)) / u
        return xi, folded
    h = 2.0 * DE_T_MAX_HALF_LINE / (nodes - 1)
    x, w = exp_sinh_rule(h, DE_T_MAX_HALF_LINE)
    xi = 1.0 + x
    folded = w * (1.0 + 0.5 / (xi * xi)) * np.sqrt(x * (x + 2.0)) / (xi * xi)
    return xi, folded


def uehling_matrix_element(sys: UehlingSystem, params: ExpParams,
                           quad: XiQuadSpec = XiQuadSpec()) -> IntegralResult:
    """
    Three-body matrix element of the Uehling potential summed over pairs

    Args:
        sys: charges and fine-structure constant
        params: exponents of the (unsymmetrised) exponential basis product
        quad: xi-quadrature settings

    Returns:
        (2 alpha / 3 pi) int_1^inf sum_ij q_i q_j U-bar_ij(2 b xi) w(xi) dxi,
        with abs_error_estimate from node_count vs 2*node_count - 1 nodes
    """
    charges = {pair: sys.pair_charge(pair) for pair in PAIRS}
    for pair in PAIRS:
        sums = _kernel_sums(pair, params, 2.0 * sys.b)
        if min(sums) <= 0:
            raise IntegralDomainError(f"pair {pair} kernel needs positive pair sums, got {sums}")

    prefactor = 2.0 * sys.fine_structure / (3.0 * math.pi)

    def integrate(nodes: int) -> float:
        xi, folded = _xi_rule(quad, nodes)
        shift = 2.0 * sys.b * xi
        kernels = sum(charges[pair] * _kernel(pair, params, shift) for pair in PAIRS if charges[pair] != 0)
        with np.errstate(invalid="ignore", over="ignore"):
            terms = folded * kernels
        return math.fsum(terms[np.isfinite(terms)])

    coarse = integrate(quad.node_count)
    fine_nodes = 2 * quad.node_count - 1
    fine = integrate(fine_nodes)
    err = prefactor * abs(fine - coarse)
    value = prefactor * fine
    converged = within_tolerance(err, value, quad.tol)
    if not converged:
        logger.warning("Uehling matrix element: xi-quadrature estimate %.3g above tol=%g", err, quad.tol)
    logger.debug("Uehling matrix element %.17g (%s mapping, %d nodes)", value, quad.mapping, fine_nodes)
    return IntegralResult(value, err, fine_nodes, converged)


# ============================================================================
# K0 AND Ki_n
# ============================================================================

def _k0_series(z: float) -> float:
    """K0(z) = sum_k (psi(k+1) - ln(z/2)) (z/2)^(2k) / (k!)^2"""
    log_half = math.log(0.5 * z)
    quarter = 0.25 * z * z
    power = 1.0
    terms = []
    k = 0
    while True:
        term = (float(psi(k + 1)) - log_half) * power
        terms.append(term)
        if abs(term) <= 1e-17 * abs(math.fsum(terms)) and k > 0:
            break
        k += 1
        power *= quarter / (k * k)
    return math.fsum(terms)


def _cosh_integral(n: int, z: float) -> float:
    """int_0^inf exp(-z cosh t) / cosh^n t dt"""
    def integrand(t):
        # exp(-z (cosh t - 1)) with cosh t - 1 = 2 sinh^2(t/2)
        return np.exp(-2.0 * z * np.sinh(0.5 * t) ** 2) / np.cosh(t) ** n

    result = quad1d_semiinfinite(integrand, decay_rate=max(1.0, math.sqrt(z)), tol=KI_TOL)
    return math.exp(-z) * result.value


def bessel_k0(z: float, method: str = "auto") -> float:
    """
    Modified Bessel function K0(z)

    method "series" uses the ascending series, "integral" the representation
    int_0^inf exp(-z cosh t) dt; "auto" takes the series for z <= 2.
    """
    if not z > 0:
        raise IntegralDomainError(f"K0 needs z > 0, got {z}")
    if method == "auto":
        method = "series" if z <= K0_SERIES_MAX_Z else "integral"
    if method == "series":
        return _k0_series(z)
    if method == "integral":
        return _cosh_integral(0, z)
    raise IntegralDomainError(f"unknown K0 method {method!r}")


def ki_n(n: int, z: float) -> float:
    """Bickley function Ki_n(z) = int_0^inf exp(-z cosh t) / cosh^n t dt; Ki_0 = K0"""
    if n < 0:
        raise IntegralDomainError(f"Ki_n order must be non-negative, got {n}")
    if not z > 0:
        raise IntegralDomainError(f"Ki_n needs z > 0, got {z}")
    return _cosh_integral(n, z)


# ============================================================================
# POINT VALUES OF U(r)
# ============================================================================

def uehling_potential_point(sys: UehlingSystem, r: float, mode: str = INTEGRAL) -> float:
    """
    Uehling potential U(r) of the charge sys.nuclear_charge

    The radial coordinate is r; z = 2 b r is the argument of K0 and Ki_n.
    mode "integral" evaluates the xi-integral, mode "ki_form" the three-term
    (1 + z^2/12) K0 - (z/12) Ki1 - (5/6 + z^2/12) Ki2 expression.
    """
    if not r > 0:
        raise IntegralDomainError(f"Uehling potential needs r > 0, got {r}")
    z = 2.0 * sys.b * r
    prefactor = 2.0 * sys.fine_structure * sys.nuclear_charge / (3.0 * math.pi * r)

    if mode == KI_FORM:
        z2 = z * z / 12.0
        bracket = (1.0 + z2) * bessel_k0(z) - (z / 12.0) * ki_n(1, z) - (5.0 / 6.0 + z2) * ki_n(2, z)
        return prefactor * bracket
    if mode == INTEGRAL:
        def integrand(x):
            xi = 1.0 + x
            return np.exp(-z * x) * (1.0 + 0.5 / (xi * xi)) * np.sqrt(x * (x + 2.0)) / (xi * xi)

        result = quad1d_semiinfinite(integrand, decay_rate=z, tol=1e-13)
        return prefactor * math.exp(-z) * result.value
    raise IntegralDomainError(f"mode must be {INTEGRAL!r} or {KI_FORM!r}, got {mode!r}")
