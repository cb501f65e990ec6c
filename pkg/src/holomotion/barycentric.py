"""Conformal barycenter extension of circle homeomorphisms to the disk.

The extension value E(h)(z) is the unique w in the disk at which the
Poisson-weighted average of the Moebius push-forward of h vanishes:

    mean_k  P(z, xi_k) * (h(xi_k) - w) / (1 - conj(w) h(xi_k)) = 0.

Solved by a damped Newton iteration; quadrature is the trapezoid rule on the
uniform sample grid, spectrally accurate for smooth boundary maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class DiskMobius:
    """Disk automorphism z -> e^{i psi} (z - a) / (1 - conj(a) z)."""

    a: complex
    psi: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.a) >= 1:
            raise ValueError("parameter a must satisfy |a| < 1")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.exp(1j * self.psi) * (z - self.a) / (1.0 - np.conj(self.a) * z)
        return complex(out) if out.ndim == 0 else out

    def inverse(self) -> "DiskMobius":
        return DiskMobius(a=complex(-self.a * np.exp(1j * self.psi)), psi=-self.psi)

    @staticmethod
    def identity() -> "DiskMobius":
        return DiskMobius(a=0j, psi=0.0)


class CircleHomeo:
    """Orientation-preserving circle map stored as strictly increasing lifts.

    theta[k] is the lifted image angle of the node 2 pi k / N; degree one
    means theta[k + N] = theta[k] + 2 pi.
    """

    def __init__(self, theta: np.ndarray):
        theta = np.asarray(theta, dtype=float)
        if theta.ndim != 1 or theta.size < 8:
            raise ValueError("need a 1-d lift array with at least 8 samples")
        if np.any(np.diff(theta) <= 0):
            raise ValueError("lift values must be strictly increasing")
        if theta[-1] - theta[0] >= 2 * np.pi:
            raise ValueError("lift must increase by less than 2 pi over one period")
        self.theta = theta
        n = theta.size
        nodes = 2 * np.pi * np.arange(n) / n
        self._perturbation = np.fft.fft(theta - nodes) / n

    @property
    def n(self) -> int:
        return self.theta.size

    @classmethod
    def identity(cls, n: int = 512) -> "CircleHomeo":
        return cls(2 * np.pi * np.arange(n) / n)

    @classmethod
    def from_lift(cls, lift, n: int = 512) -> "CircleHomeo":
        angles = 2 * np.pi * np.arange(n) / n
        return cls(np.asarray([lift(a) for a in angles], dtype=float))

    @classmethod
    def from_boundary_values(cls, values: np.ndarray) -> "CircleHomeo":
        """Build from unit-modulus samples at the uniform nodes (degree one)."""
        values = np.asarray(values, dtype=complex)
        lift = np.unwrap(np.angle(values))
        lift -= 2 * np.pi * np.floor((lift[0] + np.pi) / (2 * np.pi))
        return cls(lift)

    def lift_at(self, angles: np.ndarray) -> np.ndarray:
        """Evaluate the lift at arbitrary angles by trigonometric interpolation."""
        angles = np.asarray(angles, dtype=float)
        modes = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)
        phases = np.exp(1j * np.outer(angles.ravel(), modes))
        pert = (phases @ self._perturbation).real.reshape(angles.shape)
        return angles + pert

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        """Image points of unit-modulus inputs."""
        xi = np.asarray(xi, dtype=complex)
        return np.exp(1j * self.lift_at(np.angle(xi)))

    def boundary_values(self) -> np.ndarray:
        return np.exp(1j * self.theta)


def compose_with_mobius(
    f: DiskMobius | None, h: CircleHomeo, g: DiskMobius | None
) -> CircleHomeo:
    """Boundary map of f o h o g sampled on h's grid."""
    n = h.n
    nodes = np.exp(2j * np.pi * np.arange(n) / n)
    pts = g(nodes) if g is not None else nodes
    pts = h(pts)
    if f is not None:
        pts = f(pts)
    return CircleHomeo.from_boundary_values(pts)


def _barycenter_residual(w: complex, values: np.ndarray, weights: np.ndarray):
    """Residual mean and its Wirtinger derivatives at w."""
    denom = 1.0 - np.conj(w) * values
    push = (values - w) / denom
    v = np.sum(weights * push)
    dv_dw = np.sum(weights * (-1.0 / denom))
    dv_dwbar = np.sum(weights * push * values / denom)
    return v, dv_dw, dv_dwbar


def barycentric_extend(
    h: CircleHomeo,
    z: complex,
    tol: float = DEFAULT_TOL,
    max_iter: int = 100,
) -> complex:
    """Value of the barycentric extension of h at the interior point z."""
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("the extension is evaluated at interior points only")
    values = h.boundary_values()
    nodes = np.exp(2j * np.pi * np.arange(h.n) / h.n)
    weights = (1.0 - abs(z) ** 2) / np.abs(nodes - z) ** 2
    weights = weights / np.sum(weights)

    w = complex(np.sum(weights * values))
    if abs(w) >= 1:
        w *= 0.99 / abs(w)
    v, dw, dwbar = _barycenter_residual(w, values, weights)
    for _ in range(max_iter):
        if abs(v) < tol:
            return w
        # solve dw * delta + dwbar * conj(delta) = -v as a real 2x2 system
        a11 = (dw + dwbar).real
        a12 = (-dw + dwbar).imag
        a21 = (dw + dwbar).imag
        a22 = (dw - dwbar).real
        det = a11 * a22 - a12 * a21
        if det == 0:
            break
        rx, ry = -v.real, -v.imag
        delta = complex((a22 * rx - a12 * ry) / det, (a11 * ry - a21 * rx) / det)
        step = 1.0
        for _ in range(60):
            cand = w + step * delta
            if abs(cand) < 1.0:
                v_new, dw_new, dwbar_new = _barycenter_residual(cand, values, weights)
                if abs(v_new) < abs(v):
                    w, v, dw, dwbar = cand, v_new, dw_new, dwbar_new
                    break
            step *= 0.5
        else:
            break
    if abs(v) >= tol:
        raise RuntimeError(
            f"barycenter Newton did not converge: residual {abs(v):.3e} at w = {w}"
        )
    return w


@dataclass
class NaturalityReport:
    max_residual: float
    n_points: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def to_dict(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "n_points": self.n_points,
            "tol": self.tol,
            "passed": self.passed,
        }


def check_conformal_naturality(
    h: CircleHomeo,
    f: DiskMobius,
    g: DiskMobius,
    points,
    tol: float = 1e-8,
) -> NaturalityReport:
    """Compare E(f o h o g) with f o E(h) o g at the sample points."""
    composed = compose_with_mobius(f, h, g)
    worst = 0.0
    pts = list(points)
    for z in pts:
        left = barycentric_extend(composed, z)
        right = f(barycentric_extend(h, g(complex(z))))
        worst = max(worst, abs(left - right))
    return NaturalityReport(max_residual=worst, n_points=len(pts), tol=tol)


def beltrami_of_extension(h: CircleHomeo, z: complex, step: float = 1e-3) -> complex:
    """Finite-difference Wirtinger ratio of the extension at z.

    Central differences of E(h) in the two axis directions; |result| < 1 is
    expected for boundary maps of quasiconformal self-maps.
    """
    z = complex(z)
    if abs(z) + 2 * step >= 1:
        raise ValueError("need |z| + 2 step < 1 for the difference stencil")
    e = barycentric_extend
    fx = (e(h, z + step) - e(h, z - step)) / (2 * step)
    fy = (e(h, z + 1j * step) - e(h, z - 1j * step)) / (2 * step)
    f_z = 0.5 * (fx - 1j * fy)
    f_zbar = 0.5 * (fx + 1j * fy)
    if abs(f_z) < 1e-12:
        raise ZeroDivisionError("holomorphic derivative below 1e-12")
    return f_zbar / f_z
