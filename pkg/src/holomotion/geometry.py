"""Quantitative extendability bounds from hyperbolic geometry.

Metric convention: curvature -4 throughout, i.e. the disk density is
(1 - |z|^2)^{-1}, HALF the common curvature -1 density.  This is what makes
the core geodesic of the annulus {1 < |z| < R} have length pi^2 / log R
(rather than 2 pi^2 / log R).  All lengths accepted and returned by this
module use that convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Universal cap on the configuration length bound: log(2 + sqrt(5)).
LENGTH_BOUND_CAP = math.log(2.0 + math.sqrt(5.0))


@dataclass(frozen=True)
class HyperbolicAnnulus:
    """Round annulus {1 < |z| < R} carrying the curvature -4 metric."""

    outer_radius: float

    def __post_init__(self) -> None:
        if not self.outer_radius > 1.0:
            raise ValueError("outer radius must exceed 1")

    @property
    def core_length(self) -> float:
        return annulus_core_length(self.outer_radius)

    def density(self, lam: np.ndarray | complex) -> np.ndarray | float:
        return annulus_density(self.outer_radius, lam)


@dataclass(frozen=True)
class LengthBound:
    """Systole input ell_E together with the derived bound L_E."""

    ell_E: float
    L_E: float

    @classmethod
    def from_systole(cls, ell_E: float) -> "LengthBound":
        return cls(ell_E=ell_E, L_E=config_length_bound(ell_E))


def config_length_bound(ell_E: float) -> float:
    """min(log(2+sqrt 5), 0.5*log((ell_E/pi)^2 + 1)).

    ell_E is the minimal hyperbolic length of nontrivial non-peripheral
    closed curves on the punctured sphere with the marked points removed
    (supplied externally, never computed here).
    """
    if ell_E < 0:
        raise ValueError("ell_E must be >= 0")
    return min(LENGTH_BOUND_CAP, 0.5 * math.log((ell_E / math.pi) ** 2 + 1.0))


def annulus_extension_threshold(L_E: float) -> float:
    """exp(pi^2 / L_E): every motion of the configuration over an annulus
    with outer radius beyond this threshold extends."""
    if not L_E > 0:
        raise ValueError("L_E must be > 0")
    return math.exp(math.pi**2 / L_E)


def annulus_core_length(R: float) -> float:
    """Length pi^2 / log R of the core circle |z| = sqrt(R), curvature -4."""
    if not R > 1.0:
        raise ValueError("R must exceed 1")
    return math.pi**2 / math.log(R)


def annulus_density(R: float, lam: np.ndarray | complex) -> np.ndarray | float:
    """Curvature -4 hyperbolic density of {1 < |z| < R} at the given points."""
    if not R > 1.0:
        raise ValueError("R must exceed 1")
    modulus = np.abs(np.asarray(lam, dtype=complex))
    log_r = math.log(R)
    return (math.pi / (2.0 * log_r)) / (modulus * np.sin(math.pi * np.log(modulus) / log_r))


def annulus_curve_length(R: float, samples: np.ndarray) -> float:
    """Trapezoidal hyperbolic length of a sampled closed path in the annulus.

    The path is the polygon through the samples, closed by joining the last
    sample back to the first.  Every sample must be strictly inside
    {1 < |z| < R}.
    """
    pts = np.asarray(samples, dtype=complex).ravel()
    if pts.size < 2:
        return 0.0
    mods = np.abs(pts)
    if np.any(mods <= 1.0) or np.any(mods >= R):
        raise ValueError("samples must be strictly inside the annulus")
    closed = np.append(pts, pts[0])
    dens = annulus_density(R, closed)
    seg = np.abs(np.diff(closed))
    return float(np.sum(0.5 * (dens[:-1] + dens[1:]) * seg))


def check_short_generator_criterion(lengths: list[float], ell_E: float) -> bool:
    """True iff every generator length is strictly below config_length_bound.

    When True, every holomorphic motion of the configuration over the
    surface generated by those curves extends.
    """
    bound = config_length_bound(ell_E)
    return all(l < bound for l in lengths)
