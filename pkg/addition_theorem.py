"""
Numerical checks of plane-wave expansions over a three-body triangle

exp(i k.r21) = exp(i k.r31) exp(-i k.r32) holds exactly because
r21 = r31 - r32. Expanding each factor in spherical Bessel functions and
Legendre polynomials gives a product identity that must hold for the full
series, and a term-by-term identity (plus an angular-integrated variant)
that this module only measures.
"""
import logging
import math
import sys
from dataclasses import asdict, dataclass
from typing import Dict, List

import numpy as np
from numpy.polynomial.legendre import leggauss
from tqdm import tqdm

from bessel_single import spherical_jL
from errors import IntegralDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TriangleGeometry:
    """
    Coplanar triangle with the wave vector along z

    r31 and r32 are placed in the x-z plane at polar angles theta31 and
    theta32; r21 = r31 - r32 and its angle theta21 follow from them.
    """
    r31: float
    r32: float
    theta31: float
    theta32: float

    def __post_init__(self):
        if self.r31 < 0 or self.r32 < 0:
            raise IntegralDomainError(f"distances must be non-negative, got r31={self.r31}, r32={self.r32}")

    @property
    def _r21_vector(self):
        x = self.r31 * math.sin(self.theta31) - self.r32 * math.sin(self.theta32)
        z = self.r31 * math.cos(self.theta31) - self.r32 * math.cos(self.theta32)
        return x, z

    @property
    def r21(self) -> float:
        return math.hypot(*self._r21_vector)

    @property
    def cos21(self) -> float:
        r21 = self.r21
        if r21 == 0:
            return 1.0
        return self._r21_vector[1] / r21

    @property
    def theta21(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.cos21)))

    @property
    def angle_sum_defect(self) -> float:
        """theta21 + theta31 + theta32 - pi"""
        return self.theta21 + self.theta31 + self.theta32 - math.pi

    def to_dict(self) -> Dict:
        record = asdict(self)
        record.update(r21=self.r21, theta21=self.theta21, angle_sum_defect=self.angle_sum_defect)
        return record


def legendre_p(L_max: int, x) -> np.ndarray:
    """P_0..P_L_max at x by the three-term recurrence; shape (L_max+1,) + x.shape"""
    x = np.asarray(x, dtype=float)
    values = np.empty((L_max + 1,) + x.shape)
    values[0] = 1.0
    if L_max >= 1:
        values[1] = x
    for ell in range(1, L_max):
        values[ell + 1] = ((2 * ell + 1) * x * values[ell] - ell * values[ell - 1]) / (ell + 1)
    return values


def _check_cos(cos_theta: float):
    if abs(cos_theta) > 1.0 + 1e-12:
        raise IntegralDomainError(f"|cos theta| must not exceed 1, got {cos_theta}")


def rayleigh_partial_sum(kr: float, cos_theta: float, L_max: int) -> complex:
    """sum_{L<=L_max} i^L (2L+1) j_L(kr) P_L(cos theta), real and imaginary parts kept apart"""
    _check_cos(cos_theta)
    if kr < 0:
        raise IntegralDomainError(f"kr must be non-negative, got {kr}")
    legendre = legendre_p(L_max, cos_theta)
    real, imag = [], []
    for L in range(L_max + 1):
        term = (2 * L + 1) * spherical_jL(L, kr) * float(legendre[L])
        # i^L cycles through 1, i, -1, -i
        phase = L % 4
        if phase == 0:
            real.append(term)
        elif phase == 1:
            imag.append(term)
        elif phase == 2:
            real.append(-term)
        else:
            imag.append(-term)
    return complex(math.fsum(real), math.fsum(imag))


def product_identity_residual(geom: TriangleGeometry, k: float, L_max: int) -> float:
    """|expansion of exp(i k.r21) - expansion of exp(i k.r31) * expansion of exp(-i k.r32)|"""
    lhs = rayleigh_partial_sum(k * geom.r21, geom.cos21, L_max)
    rhs = (rayleigh_partial_sum(k * geom.r31, math.cos(geom.theta31), L_max)
           * rayleigh_partial_sum(k * geom.r32, -math.cos(geom.theta32), L_max))
    return abs(lhs - rhs)


def _cauchy_coefficients(geom: TriangleGeometry, k: float, L: int) -> np.ndarray:
    """(-1)^(L-l) (2l+1)(2L-2l+1) j_l(k r31) j_(L-l)(k r32) for l = 0..L"""
    return np.array([
        (-1) ** (L - ell) * (2 * ell + 1) * (2 * L - 2 * ell + 1)
        * spherical_jL(ell, k * geom.r31) * spherical_jL(L - ell, k * geom.r32)
        for ell in range(L + 1)
    ])


def termwise_identity_residual(geom: TriangleGeometry, k: float, L: int) -> float:
    """
    |(2L+1) j_L(k r21) P_L(cos th21) - sum_l (-1)^(L-l) (2l+1)(2L-2l+1) j_l j_(L-l) P_l P_(L-l)|

    Measured only; the per-L equality need not hold.
    """
    p21 = legendre_p(L, geom.cos21)[L]
    p31 = legendre_p(L, math.cos(geom.theta31))
    p32 = legendre_p(L, math.cos(geom.theta32))
    lhs = (2 * L + 1) * spherical_jL(L, k * geom.r21) * p21
    coefficients = _cauchy_coefficients(geom, k, L)
    rhs = math.fsum(coefficients[ell] * p31[ell] * p32[L - ell] for ell in range(L + 1))
    return abs(lhs - rhs)


def angular_identity_residual(geom: TriangleGeometry, k: float, L: int, nodes: int = 32) -> float:
    """
    |j_L(k r21) - angular-integrated right side| with theta21, theta32 on (-pi/2, pi/2)

    The right side is (-1)^L/4 sum_l (-1)^l (2l+1)(2L-2l+1) j_l(k r31) j_(L-l)(k r32)
    times the double integral of P_l(cos th31) P_(L-l)(cos th32) P_L(cos th21)
    sin th21 sin th32, with th31 = pi - th21 - th32.
    """
    x, w = leggauss(nodes)
    theta = 0.5 * math.pi * x
    weights = 0.5 * math.pi * w
    t21, t32 = np.meshgrid(theta, theta, indexing="ij")
    t31 = math.pi - t21 - t32
    measure = np.outer(weights, weights) * np.sin(t21) * np.sin(t32)
    p21 = legendre_p(L, np.cos(t21))[L]
    p31 = legendre_p(L, np.cos(t31))
    p32 = legendre_p(L, np.cos(t32))
    coefficients = _cauchy_coefficients(geom, k, L)
    rhs = 0.25 * math.fsum(
        coefficients[ell] * math.fsum((p31[ell] * p32[L - ell] * p21 * measure).ravel())
        for ell in range(L + 1)
    )
    return abs(spherical_jL(L, k * geom.r21) - rhs)


def random_geometry(rng: np.random.Generator) -> TriangleGeometry:
    r31, r32 = rng.uniform(0.1, 3.0, size=2)
    theta31, theta32 = rng.uniform(0.0, math.pi, size=2)
    return TriangleGeometry(float(r31), float(r32), float(theta31), float(theta32))


def residual_survey(n: int, k: float = 1.0, L: int = 1, seed: int = 0,
                    L_max: int = 30) -> List[Dict]:
    """Residuals of all three identities over n random geometries"""
    rng = np.random.default_rng(seed)
    rows = []
    show = sys.stderr.isatty()
    for _ in tqdm(range(n), desc="addition survey", disable=not show, leave=False):
        geom = random_geometry(rng)
        row = geom.to_dict()
        row.update(
            k=k, L=L,
            product_residual=product_identity_residual(geom, k, L_max),
            termwise_residual=termwise_identity_residual(geom, k, L),
            angular_residual=angular_identity_residual(geom, k, L),
        )
        rows.append(row)
    logger.info("addition survey: %d geometries, median termwise residual %.3g",
                n, float(np.median([r["termwise_residual"] for r in rows])) if rows else 0.0)
    return rows
