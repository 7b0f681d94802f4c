"""
Brute-force quadrature over perimetric coordinates

Any three-body integral of the form

    I = int int int f(r32, r31, r21) exp(-alpha r32 - beta r31 - gamma r21) dr32 dr31 dr21

equals 2 * int u-space f(r(u)) exp(-(b+g) u1 - (a+g) u2 - (a+b) u3) du1 du2 du3
with each u_i independently on [0, inf). This module evaluates that form
with tensor Gauss-Laguerre rules matched to the three decay rates, plus the
double-exponential 1D rules shared by the rest of the package.
"""
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, roots_genlaguerre
from tqdm import tqdm

from config import (
    DE_MAX_LEVELS, DE_START_STEP, DE_T_MAX_FINITE, DE_T_MAX_HALF_LINE, DE_T_MAX_TENSOR,
    DEFAULT_TOL, ORACLE_MIN_NODES, ORACLE_NODES, ORACLE_TOL, ORACLE_WORKERS,
)
from core import ExpParams, IntegralResult, within_tolerance
from errors import ConvergenceError, IntegralDomainError

logger = logging.getLogger(__name__)

# Vectorised integrand: three arrays of coordinates in, one array out
Integrand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

HALF_PI = 0.5 * math.pi


def _frozen(*arrays):
    for a in arrays:
        a.flags.writeable = False
    return arrays


# ============================================================================
# NODE TABLES
# ============================================================================

@lru_cache(maxsize=64)
def laguerre_rule(n: int, power: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Generalised Gauss-Laguerre nodes/weights for u^power exp(-u) on [0, inf)"""
    x, w = roots_genlaguerre(n, power)
    return _frozen(np.asarray(x, dtype=float), np.asarray(w, dtype=float))


@lru_cache(maxsize=256)
def exp_sinh_rule(h: float, t_max: float = DE_T_MAX_HALF_LINE) -> Tuple[np.ndarray, np.ndarray]:
    """Exp-sinh rule on [0, inf): x = exp(pi/2 sinh t), step h, |t| <= t_max"""
    half = int(math.ceil(t_max / h))
    t = h * np.arange(-half, half + 1)
    with np.errstate(over="ignore", under="ignore"):
        x = np.exp(HALF_PI * np.sinh(t))
        w = h * HALF_PI * np.cosh(t) * x
    keep = np.isfinite(w) & (x > 0)
    return _frozen(x[keep], w[keep])


@lru_cache(maxsize=256)
def tanh_sinh_rule(h: float, t_max: float = DE_T_MAX_FINITE) -> Tuple[np.ndarray, np.ndarray]:
    """Tanh-sinh rule on [0, 1]: x = expit(pi sinh t), step h, |t| <= t_max"""
    half = int(math.ceil(t_max / h))
    t = h * np.arange(-half, half + 1)
    y = math.pi * np.sinh(t)
    left = expit(y)
    w = h * math.pi * np.cosh(t) * left * expit(-y)
    # nodes that round onto an endpoint carry no information
    keep = (left > 0.0) & (left < 1.0) & (w > 0.0)
    return _frozen(left[keep], w[keep])


# ============================================================================
# ADAPTIVE 1D DRIVER
# ============================================================================

def _adaptive_de(f: Callable[[np.ndarray], np.ndarray],
                 rule: Callable[[float], Tuple[np.ndarray, np.ndarray]],
                 tol: float, strict: bool, label: str) -> IntegralResult:
    h = DE_START_STEP
    previous = None
    value, err, used = 0.0, math.inf, 0
    for level in range(DE_MAX_LEVELS + 1):
        x, w = rule(h)
        with np.errstate(all="ignore"):
            terms = w * np.asarray(f(x), dtype=float)
        finite = np.isfinite(terms)
        if not finite.all():
            logger.debug("%s: dropped %d non-finite node contributions at h=%g",
                         label, int((~finite).sum()), h)
        value = math.fsum(terms[finite])
        used = int(x.size)
        if previous is not None:
            err = abs(value - previous)
            if within_tolerance(err, value, tol):
                logger.debug("%s converged at level %d (h=%g, %d nodes)", label, level, h, used)
                return IntegralResult(value, err, used, True)
        previous = value
        h *= 0.5

    result = IntegralResult(value, err, used, False)
    message = f"{label} did not reach tol={tol:g} after {DE_MAX_LEVELS} halvings (estimate {err:.3g})"
    if strict:
        raise ConvergenceError(message, result)
    logger.warning(message)
    return result


def quad1d_semiinfinite(f: Callable[[np.ndarray], np.ndarray], decay_rate: float = 1.0,
                        tol: float = DEFAULT_TOL, strict: bool = False) -> IntegralResult:
    """
    Integrate f over (0, inf) with an exp-sinh rule scaled by 1/decay_rate

    Args:
        f: vectorised integrand
        decay_rate: rough exponential decay rate of f; sets the length scale
        tol: relative tolerance on successive step halvings
        strict: raise ConvergenceError instead of returning converged=False

    Returns:
        IntegralResult; abs_error_estimate is the last halving difference
    """
    if not decay_rate > 0:
        raise IntegralDomainError(f"decay_rate must be positive, got {decay_rate}")
    scale = 1.0 / decay_rate

    def rule(h):
        x, w = exp_sinh_rule(h, DE_T_MAX_HALF_LINE)
        return x * scale, w * scale

    return _adaptive_de(f, rule, tol, strict, "exp-sinh quadrature")


def quad1d_finite(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                  tol: float = DEFAULT_TOL, strict: bool = False) -> IntegralResult:
    """Integrate f over (a, b) with tanh-sinh; endpoint singularities are allowed"""
    if a == b:
        return IntegralResult(0.0, 0.0, 0, True)
    if a > b:
        flipped = quad1d_finite(f, b, a, tol, strict)
        return IntegralResult(-flipped.value, flipped.abs_error_estimate,
                              flipped.terms_used, flipped.converged)
    width = b - a

    def rule(h):
        x, w = tanh_sinh_rule(h, DE_T_MAX_FINITE)
        return a + width * x, width * w

    return _adaptive_de(f, rule, tol, strict, "tanh-sinh quadrature")


# ============================================================================
# PERIMETRIC TENSOR RULES
# ============================================================================

def _axis_rules(rates: Optional[Sequence[float]], powers: Sequence[float], nodes: int):
    """Per-axis (nodes, weights); weights carry u^p and the exponential"""
    axes = []
    if rates is None:
        h = 2.0 * DE_T_MAX_TENSOR / (nodes - 1)
        x, w = exp_sinh_rule(h, DE_T_MAX_TENSOR)
        for p in powers:
            axes.append((x, w * x ** p))
        return axes
    for rate, p in zip(rates, powers):
        if not rate > 0:
            raise IntegralDomainError(f"perimetric decay rates must be positive, got {tuple(rates)}")
        x, w = laguerre_rule(nodes, float(p))
        axes.append((x / rate, w / rate ** (p + 1.0)))
    return axes


def _tensor_sum(g: Integrand, axes, workers: int, label: str) -> float:
    (x1, w1), (x2, w2), (x3, w3) = axes
    u2, u3 = np.meshgrid(x2, x3, indexing="ij")
    w23 = np.outer(w2, w3)

    def slab(i: int) -> float:
        u1 = np.full_like(u2, x1[i])
        with np.errstate(all="ignore"):
            values = w23 * np.asarray(g(u1, u2, u3), dtype=float)
        values[w23 == 0.0] = 0.0
        return w1[i] * math.fsum(values.ravel())

    show = logger.isEnabledFor(logging.INFO) and sys.stderr.isatty()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        # map() keeps slab order, so the reduction is deterministic
        slabs = list(tqdm(pool.map(slab, range(x1.size)), total=x1.size,
                          desc=label, leave=False, disable=not show))
    return math.fsum(slabs)


def perimetric_quad(f: Integrand, rates: Optional[Sequence[float]] = None,
                    powers: Sequence[float] = (0.0, 0.0, 0.0), nodes: int = ORACLE_NODES,
                    tol: float = ORACLE_TOL, workers: int = ORACLE_WORKERS,
                    strict: bool = False) -> IntegralResult:
    """
    Tensor quadrature of int f(u1,u2,u3) prod u_i^p_i exp(-rate_i u_i) du over [0, inf)^3

    With rates=None there is no exponential weight and every axis uses an
    exp-sinh rule; f must then decay algebraically. The error estimate
    compares `nodes` against a grid twice as fine.
    """
    if nodes < ORACLE_MIN_NODES:
        raise IntegralDomainError(f"nodes per axis must be at least {ORACLE_MIN_NODES}, got {nodes}")
    if min(powers) < 0:
        raise IntegralDomainError(f"axis powers must be non-negative, got {tuple(powers)}")

    coarse = _tensor_sum(f, _axis_rules(rates, powers, nodes), workers, "perimetric grid")
    fine_nodes = 2 * nodes - 1 if rates is None else 2 * nodes
    fine = _tensor_sum(f, _axis_rules(rates, powers, fine_nodes), workers, "perimetric grid (refined)")

    err = abs(fine - coarse)
    result = IntegralResult(fine, err, fine_nodes ** 3, within_tolerance(err, fine, tol))
    logger.debug("perimetric quadrature: %d -> %d nodes/axis, value %.17g, estimate %.3g",
                 nodes, fine_nodes, fine, err)
    if not result.converged:
        message = f"perimetric quadrature estimate {err:.3g} above tol={tol:g} at {fine_nodes} nodes/axis"
        if strict:
            raise ConvergenceError(message, result)
        logger.warning(message)
    return result


# ============================================================================
# THREE-BODY ORACLE
# ============================================================================

@dataclass(frozen=True)
class OracleSpec:
    """
    Brute-force three-body integral request

    `integrand` receives arrays (r32, r31, r21) and excludes the exponential;
    include_volume_weight multiplies in r32 r31 r21.
    """
    integrand: Integrand
    params: ExpParams
    include_volume_weight: bool = False
    nodes_per_axis: int = ORACLE_NODES
    tol: float = ORACLE_TOL
    workers: int = ORACLE_WORKERS
    strict: bool = False

    def __post_init__(self):
        if self.nodes_per_axis < ORACLE_MIN_NODES:
            raise IntegralDomainError(
                f"nodes_per_axis must be at least {ORACLE_MIN_NODES}, got {self.nodes_per_axis}"
            )


def quad3d(spec: OracleSpec) -> IntegralResult:
    """Three-body integral by tensor Gauss-Laguerre in perimetric coordinates"""
    f = spec.integrand
    weighted = spec.include_volume_weight

    def g(u1, u2, u3):
        r32, r31, r21 = u2 + u3, u1 + u3, u1 + u2
        values = f(r32, r31, r21)
        return values * (r32 * r31 * r21) if weighted else values

    result = perimetric_quad(g, spec.params.perimetric_rates(), (0.0, 0.0, 0.0),
                             spec.nodes_per_axis, spec.tol, spec.workers, spec.strict)
    # Jacobian of (r32, r31, r21) -> (u1, u2, u3)
    return IntegralResult(2.0 * result.value, 2.0 * result.abs_error_estimate,
                          result.terms_used, result.converged)


def monomial(k: int, l: int, n: int,
             factor: Optional[Integrand] = None) -> Integrand:
    """Integrand r32^k r31^l r21^n, optionally times factor(r32, r31, r21)"""
    def integrand(r32, r31, r21):
        values = r32 ** k * r31 ** l * r21 ** n
        return values * factor(r32, r31, r21) if factor is not None else values
    return integrand
