"""Sampled boundary-function analysis on the unit circle.

A BoundaryFunction holds N complex samples at the roots of unity
xi_k = exp(2 pi i k / N) together with their Fourier coefficients c_m,
m in [-N/2, N/2), under the pairing f(xi) = sum_m c_m xi^m.  Grids are
fixed powers of two; transforms act in coefficient space.
"""

from __future__ import annotations

import warnings

import numpy as np

MIN_SAMPLES = 64

#: Fraction of total energy in the top quarter of the frequency range that
#: trips the aliasing guard.
BAND_GUARD_FRACTION = 0.01


class BandLimitWarning(UserWarning):
    """Emitted when the top quarter of the spectrum carries real energy."""


class BoundaryFunction:
    """Complex samples on the uniform circle grid with a coefficient view."""

    __slots__ = ("samples", "coefficients")

    def __init__(self, samples: np.ndarray):
        samples = np.asarray(samples, dtype=complex)
        n = samples.size
        if n < MIN_SAMPLES or n & (n - 1):
            raise ValueError(f"sample count must be a power of two >= {MIN_SAMPLES}, got {n}")
        self.samples = samples
        # numpy frequency order: m = 0..N/2-1, -N/2..-1
        self.coefficients = np.fft.fft(samples) / n

    @classmethod
    def from_coefficients(cls, coefficients: np.ndarray) -> "BoundaryFunction":
        coefficients = np.asarray(coefficients, dtype=complex)
        obj = cls.__new__(cls)
        obj.coefficients = coefficients
        obj.samples = np.fft.ifft(coefficients) * coefficients.size
        return obj

    @classmethod
    def from_function(cls, fn, n: int) -> "BoundaryFunction":
        return cls(fn(unit_nodes(n)))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def nodes(self) -> np.ndarray:
        return unit_nodes(self.n)

    def coefficient(self, m: int) -> complex:
        if not -self.n // 2 <= m < self.n // 2:
            return 0j
        return complex(self.coefficients[m % self.n])

    def modes(self) -> np.ndarray:
        """Signed frequency of each coefficient slot, numpy FFT order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    def mean(self) -> complex:
        return complex(self.coefficients[0])

    def is_real(self, tol: float = 1e-10) -> bool:
        energy = np.linalg.norm(self.samples)
        if energy == 0:
            return True
        return np.linalg.norm(self.samples.imag) <= tol * energy

    def __add__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        return BoundaryFunction(self.samples + other.samples)

    def __mul__(self, scalar: complex) -> "BoundaryFunction":
        return BoundaryFunction(self.samples * scalar)

    __rmul__ = __mul__

    def to_csv(self, samples_path, coefficients_path) -> None:
        """Debug dump: samples as (k, re, im), coefficients as (m, re, im)."""
        with open(samples_path, "w", encoding="ascii") as fh:
            fh.write("k,re,im\n")
            for k, v in enumerate(self.samples):
                fh.write(f"{k},{float(v.real)!r},{float(v.imag)!r}\n")
        order = np.argsort(self.modes())
        with open(coefficients_path, "w", encoding="ascii") as fh:
            fh.write("m,re,im\n")
            for idx in order:
                c = self.coefficients[idx]
                fh.write(f"{self.modes()[idx]},{float(c.real)!r},{float(c.imag)!r}\n")


class AnalyticBoundaryFunction(BoundaryFunction):
    """Boundary values of a holomorphic function: negative modes vanish."""

    __slots__ = ()

    def __init__(self, samples: np.ndarray, tol: float = 1e-8):
        super().__init__(samples)
        residual = analyticity_residual(self)
        if residual > tol:
            raise ValueError(
                f"analyticity residual {residual:.3e} above tolerance {tol:.1e}"
            )


def unit_nodes(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def top_band_energy_fraction(f: BoundaryFunction) -> float:
    """Energy fraction carried by modes with |m| >= 3N/8 (the top quarter)."""
    c = f.coefficients
    total = float(np.sum(np.abs(c) ** 2))
    if total == 0:
        return 0.0
    cutoff = 3 * f.n // 8
    mask = np.abs(f.modes()) >= cutoff
    return float(np.sum(np.abs(c[mask]) ** 2) / total)


def _band_guard(f: BoundaryFunction, where: str) -> None:
    frac = top_band_energy_fraction(f)
    if frac > BAND_GUARD_FRACTION:
        warnings.warn(
            f"{where}: top quarter of the spectrum holds {frac:.1%} of the energy",
            BandLimitWarning,
            stacklevel=3,
        )


def hilbert_transform(f: BoundaryFunction, tol: float = 1e-10) -> BoundaryFunction:
    """Conjugate-function transform: c_m -> -i sgn(m) c_m, c_0 -> 0.

    Input must be real-valued; the output is the real boundary trace of the
    conjugate harmonic function normalized to vanish at the disk center.
    """
    if not f.is_real(tol):
        raise ValueError("hilbert_transform requires a real-valued input")
    _band_guard(f, "hilbert_transform")
    modes = f.modes()
    out = -1j * np.sign(modes) * f.coefficients
    result = BoundaryFunction.from_coefficients(out)
    # coefficient action preserves Hermitian symmetry; discard roundoff imag
    return BoundaryFunction(result.samples.real.astype(complex))


def poisson_eval(f: BoundaryFunction, lam: complex) -> complex:
    """Harmonic extension sum_m c_m r^{|m|} e^{i m theta} at lam, |lam| < 1."""
    lam = complex(lam)
    r = abs(lam)
    if r >= 1.0:
        raise ValueError("poisson_eval requires |lam| < 1")
    if r == 0.0:
        return f.mean()
    modes = f.modes()
    theta = np.angle(lam)
    terms = f.coefficients * r ** np.abs(modes) * np.exp(1j * modes * theta)
    return complex(np.sum(terms))


def analyticity_residual(f: BoundaryFunction) -> float:
    """Relative l2 mass of the negative-index coefficients (0 for analytic)."""
    c = f.coefficients
    total = float(np.sum(np.abs(c) ** 2))
    if total == 0:
        return 0.0
    neg = float(np.sum(np.abs(c[f.modes() < 0]) ** 2))
    return float(np.sqrt(neg / total))


def cauchy_eval(f: BoundaryFunction, lam: complex, tol: float = 1e-8) -> complex:
    """Power-series value sum_{m>=0} c_m lam^m for |lam| <= 1.

    Requires the analyticity residual to sit below tol; interior values of
    flow states are read off this way.
    """
    residual = analyticity_residual(f)
    if residual > tol:
        raise ValueError(
            f"cauchy_eval requires an analytic input (residual {residual:.3e})"
        )
    lam = complex(lam)
    if abs(lam) > 1.0 + 1e-12:
        raise ValueError("cauchy_eval requires |lam| <= 1")
    modes = f.modes()
    mask = modes >= 0
    return complex(
        np.sum(f.coefficients[mask] * lam ** modes[mask].astype(float))
    )


def cauchy_eval_many(f: BoundaryFunction, lams: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Vectorized :func:`cauchy_eval` over an array of points."""
    residual = analyticity_residual(f)
    if residual > tol:
        raise ValueError(
            f"cauchy_eval requires an analytic input (residual {residual:.3e})"
        )
    lams = np.asarray(lams, dtype=complex)
    modes = f.modes()
    mask = modes >= 0
    powers = lams[..., None] ** modes[mask].astype(float)
    return powers @ f.coefficients[mask]


def project_analytic(f: BoundaryFunction) -> BoundaryFunction:
    """Zero out the negative modes (orthogonal projection onto analytic)."""
    c = f.coefficients.copy()
    c[f.modes() < 0] = 0
    return BoundaryFunction.from_coefficients(c)


def holder_half_seminorm(f: BoundaryFunction) -> float:
    """Discrete Holder-1/2 seminorm estimate over well-separated sample pairs.

    max |f(xi) - f(xi')| / |xi - xi'|^{1/2} over pairs with chordal distance
    >= 2 pi / N.  Diagnostic only; blocked to bound memory on large grids.
    """
    nodes = f.nodes
    vals = f.samples
    n = f.n
    cutoff = 2.0 * np.pi / n
    best = 0.0
    block = 512
    for start in range(0, n, block):
        sl = slice(start, min(start + block, n))
        dist = np.abs(nodes[sl, None] - nodes[None, :])
        dv = np.abs(vals[sl, None] - vals[None, :])
        mask = dist >= cutoff
        if np.any(mask):
            ratios = dv[mask] / np.sqrt(dist[mask])
            best = max(best, float(ratios.max()))
    return best
