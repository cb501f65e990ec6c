"""Radial curve families threading a finite-point motion through an annulus.

For each boundary sample xi_k of the parameter disk, the structure carries a
family of disjoint arcs from 0 to the rim points zeta = R e^{i theta0},
realized as angular displacements of the straight rays:

    curve(xi, zeta) = { rho * exp(i (theta0 + u(xi, rho, theta0))) : rho in [0, R] }

The displacement field u vanishes for rho <= 2r and at rho = R, is built
from smooth compactly supported bumps so the curve through zeta_j = z_j R/|z_j|
passes exactly through the trace value w_j(xi), and keeps
theta0 -> theta0 + u strictly increasing so distinct curves only meet at 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circle import unit_nodes


class MonotonicityViolation(ValueError):
    """Raised when the required displacements force a non-injective circle map."""


# ---------------------------------------------------------------------------
# smooth transition profiles (flat to all orders at both ends)
# ---------------------------------------------------------------------------

def _sigma(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smoothstep(x: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, flat at both ends."""
    x = np.asarray(x, dtype=float)
    s = _sigma(x)
    return s / (s + _sigma(1.0 - x))


def smoothstep_d(x: np.ndarray) -> np.ndarray:
    """Derivative of :func:`smoothstep`."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0) & (x < 1)
    out = np.zeros_like(x, dtype=float)
    xi = x[inside]
    s = np.exp(-1.0 / xi)
    sb = np.exp(-1.0 / (1.0 - xi))
    ds = s / xi**2
    dsb = sb / (1.0 - xi) ** 2
    out[inside] = (ds * sb + s * dsb) / (s + sb) ** 2
    return out


def _wrap_angle(a: np.ndarray) -> np.ndarray:
    """Wrap to (-pi, pi]."""
    return np.mod(np.asarray(a, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


# ---------------------------------------------------------------------------
# motion traces and radii
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MotionTraces:
    """Finite power-series traces lam -> w_j(lam) of the marked points.

    Coefficients are in increasing powers of lam; w_j(0) is the marked
    basepoint z_j.  The fixed point 1 rides along as the constant trace 1
    unless a supplied trace is already based there.
    """

    coefficients: tuple[tuple[complex, ...], ...]

    @classmethod
    def from_coefficients(cls, arrays, include_unit: bool = True) -> "MotionTraces":
        coeffs = [tuple(complex(c) for c in arr) for arr in arrays]
        if include_unit and not any(c and c[0] == 1 for c in coeffs):
            coeffs.append((1 + 0j,))
        traces = cls(tuple(coeffs))
        traces.validate()
        return traces

    @classmethod
    def identity(cls) -> "MotionTraces":
        """The trivial motion: only the constant unit trace."""
        return cls.from_coefficients([])

    @property
    def count(self) -> int:
        return len(self.coefficients)

    def basepoints(self) -> np.ndarray:
        return np.array([c[0] for c in self.coefficients], dtype=complex)

    def evaluate(self, lam) -> np.ndarray:
        """Trace values, shape (count,) + shape(lam)."""
        lam = np.asarray(lam, dtype=complex)
        out = np.empty((self.count,) + lam.shape, dtype=complex)
        for j, coeffs in enumerate(self.coefficients):
            acc = np.zeros_like(lam)
            for c in reversed(coeffs):
                acc = acc * lam + c
            out[j] = acc
        return out

    def verification_grid(self, n_angles: int = 256) -> np.ndarray:
        angles = unit_nodes(max(64, n_angles))
        radii = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        return np.concatenate([[0j], (radii[:, None] * angles[None, :]).ravel()])

    def validate(self) -> None:
        if self.count == 0:
            raise ValueError("need at least one trace")
        grid = self.verification_grid()
        vals = self.evaluate(grid)
        mods = np.abs(vals)
        scale = float(mods.max())
        if float(mods.min()) <= 1e-12 * max(1.0, scale):
            raise ValueError("a trace vanishes (or meets 0) on the verification grid")
        for i in range(self.count):
            for j in range(i + 1, self.count):
                gap = float(np.min(np.abs(vals[i] - vals[j])))
                if gap <= 1e-9 * max(1.0, scale):
                    raise ValueError(
                        f"traces {i} and {j} intersect on the verification grid"
                    )


@dataclass(frozen=True)
class Radii:
    """Inner/outer flow radii with the separation 0 < r < 3r < R."""

    r: float
    R: float

    def __post_init__(self) -> None:
        if not 0 < self.r < 3 * self.r < self.R:
            raise ValueError(f"need 0 < r < 3r < R, got r={self.r}, R={self.R}")


def compute_radii(traces: MotionTraces, n_angles: int = 256) -> Radii:
    """R = (grid max of |w_j|) + 1 and r = (grid min of |w_j|) / 3."""
    vals = traces.evaluate(traces.verification_grid(n_angles))
    mods = np.abs(vals)
    lo = float(mods.min())
    if lo <= 0:
        raise ValueError("a trace vanishes on the grid")
    return Radii(r=lo / 3.0, R=float(mods.max()) + 1.0)


# ---------------------------------------------------------------------------
# the structure
# ---------------------------------------------------------------------------

@dataclass
class RadialStructure:
    """Displacement-field realization of the curve family.

    Immutable after construction by convention; field evaluations are pure.
    Arrays indexed by (boundary sample k, marked point j).
    """

    radii: Radii
    boundary_nodes: np.ndarray          # (N,) complex roots of unity
    ray_angles: np.ndarray              # (M,) ray grid labels
    traces: MotionTraces
    base_angles: np.ndarray             # (J,) theta_j = arg z_j
    psi_widths: np.ndarray              # (J,) angular bump half-widths
    displacement: np.ndarray            # (N, J) d_j(xi_k)
    rho_marks: np.ndarray               # (N, J) |w_j(xi_k)|
    phi_lo: np.ndarray                  # (N, J) support breakpoints
    phi_rise_end: np.ndarray
    phi_fall_start: np.ndarray
    phi_hi: np.ndarray
    stolz_epsilon: float = 0.0
    stolz_c: float = 0.0

    @property
    def n_boundary(self) -> int:
        return self.boundary_nodes.size

    @property
    def n_rays(self) -> int:
        return self.ray_angles.size

    @property
    def n_marked(self) -> int:
        return self.base_angles.size

    # -- displacement field ------------------------------------------------

    def _phi_parts(self, k_idx, rho):
        """Radial bump values and d/d rho, shape (K, J)."""
        rho = np.asarray(rho, dtype=float)[:, None]
        lo = self.phi_lo[k_idx]
        re = self.phi_rise_end[k_idx]
        fs = self.phi_fall_start[k_idx]
        hi = self.phi_hi[k_idx]
        phi = np.zeros(np.broadcast_shapes(rho.shape, lo.shape), dtype=float)
        dphi = np.zeros_like(phi)

        rise = (rho > lo) & (rho < re)
        if np.any(rise):
            x = (rho - lo) / (re - lo)
            phi = np.where(rise, smoothstep(x), phi)
            dphi = np.where(rise, smoothstep_d(x) / (re - lo), dphi)
        plateau = (rho >= re) & (rho <= fs)
        phi = np.where(plateau, 1.0, phi)
        fall = (rho > fs) & (rho < hi)
        if np.any(fall):
            x = (hi - rho) / (hi - fs)
            phi = np.where(fall, smoothstep(x), phi)
            dphi = np.where(fall, -smoothstep_d(x) / (hi - fs), dphi)
        return phi, dphi

    def _psi_parts(self, theta0):
        """Angular bump values and d/d theta0 per marked point, shape (..., J)."""
        theta0 = np.asarray(theta0, dtype=float)
        delta = _wrap_angle(theta0[..., None] - self.base_angles)
        x = 1.0 - np.abs(delta) / self.psi_widths
        psi = smoothstep(x)
        dpsi = -np.sign(delta) * smoothstep_d(x) / self.psi_widths
        return psi, dpsi

    def displacement_field(self, k_idx, rho, theta0):
        """u, du/drho, du/dtheta0 at boundary samples k_idx, radii rho, label theta0.

        k_idx and rho are matching 1-d arrays; theta0 is scalar or matching.
        """
        k_idx = np.atleast_1d(np.asarray(k_idx, dtype=int))
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        theta0 = np.broadcast_to(np.asarray(theta0, dtype=float), rho.shape)
        phi, dphi = self._phi_parts(k_idx, rho)
        psi, dpsi = self._psi_parts(theta0)
        d = self.displacement[k_idx]
        u = np.sum(d * phi * psi, axis=-1)
        u_rho = np.sum(d * dphi * psi, axis=-1)
        u_theta = np.sum(d * phi * dpsi, axis=-1)
        return u, u_rho, u_theta

    def curve_point(self, k: int, theta0: float, rho) -> np.ndarray:
        """Points of the curve labeled theta0 at the given radii."""
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        u, _, _ = self.displacement_field(np.full(rho.shape, k), rho, theta0)
        return rho * np.exp(1j * (theta0 + u))

    def ray_slice(self, theta0: float) -> "RaySlice":
        """Fast evaluator of u and du/drho along one ray, all samples at once."""
        return RaySlice(self, float(theta0))

    def to_json_dict(self, n_rho: int = 32) -> dict:
        """Grids plus displacement samples, for dumping the structure to JSON."""
        rho_grid = np.linspace(0.0, self.radii.R, n_rho)
        field = []
        for theta in self.ray_angles:
            ray = self.ray_slice(float(theta))
            per_rho = []
            for rho in rho_grid:
                u, _ = ray(np.full(self.n_boundary, rho))
                per_rho.append([float(v) for v in u])
            field.append(per_rho)
        return {
            "radii": {"r": self.radii.r, "R": self.radii.R},
            "boundary_samples": self.n_boundary,
            "ray_angles": [float(t) for t in self.ray_angles],
            "rho_grid": [float(t) for t in rho_grid],
            "marked_base_angles": [float(t) for t in self.base_angles],
            "stolz": {"epsilon": self.stolz_epsilon, "c": self.stolz_c},
            "displacement": field,
        }

    def ray_label(self, k: int, z: complex, tol: float = 1e-12) -> float:
        """Label theta0 of the unique curve through z at boundary sample k."""
        rho = abs(z)
        phi_target = float(np.angle(z))
        theta0 = phi_target
        ks = np.array([k])
        rr = np.array([rho])
        for _ in range(100):
            u, _, u_theta = self.displacement_field(ks, rr, theta0)
            err = _wrap_angle(theta0 + u[0] - phi_target)[()]
            if abs(err) < tol:
                break
            theta0 = theta0 - err / max(1e-3, 1.0 + u_theta[0])
        else:
            raise RuntimeError("ray label iteration did not converge")
        return float(theta0)

    def check_monotone(self, margin: float = 0.05, n_rho: int = 64, n_theta: int = 256):
        """Min over a grid of d(theta0 + u)/dtheta0; raises below the margin."""
        r, R = self.radii.r, self.radii.R
        rho_grid = np.linspace(2 * r, R, n_rho)
        theta_grid = np.linspace(-np.pi, np.pi, n_theta, endpoint=False)
        worst = np.inf
        n = self.n_boundary
        k_flat = np.repeat(np.arange(n), n_theta)
        theta_flat = np.tile(theta_grid, n)
        for rho in rho_grid:
            _, _, u_theta = self.displacement_field(
                k_flat, np.full(k_flat.shape, rho), theta_flat
            )
            worst = min(worst, float(1.0 + u_theta.min()))
        if worst <= margin:
            raise MonotonicityViolation(
                f"circle-map derivative min {worst:.3f} <= margin {margin}; "
                "refine the trace grid or shrink bump widths"
            )
        return worst


class RaySlice:
    """Displacement field restricted to one ray label, precomputed per sample.

    Along a fixed ray the angular bump factors are constants, so only the
    radial profiles vary; columns whose weight vanishes identically are
    dropped, which makes the trivial structure evaluate to zero for free.
    """

    __slots__ = ("theta0", "weights", "lo", "re", "fs", "hi", "active")

    def __init__(self, rs: RadialStructure, theta0: float):
        self.theta0 = theta0
        psi, _ = rs._psi_parts(np.array(theta0))
        w = rs.displacement * psi[None, :]
        cols = np.nonzero(np.abs(w).max(axis=0) > 0)[0]
        self.active = cols.size > 0
        self.weights = w[:, cols]
        self.lo = rs.phi_lo[:, cols]
        self.re = rs.phi_rise_end[:, cols]
        self.fs = rs.phi_fall_start[:, cols]
        self.hi = rs.phi_hi[:, cols]

    def __call__(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(u, du/drho) at per-sample radii rho, shape (N,)."""
        if not self.active:
            zero = np.zeros(rho.shape, dtype=float)
            return zero, zero
        col = rho[:, None]
        lo, re, fs, hi = self.lo, self.re, self.fs, self.hi
        phi = np.zeros(self.weights.shape, dtype=float)
        dphi = np.zeros_like(phi)
        rise = (col > lo) & (col < re)
        if rise.any():
            x = np.where(rise, (col - lo) / (re - lo), 0.5)
            phi = np.where(rise, smoothstep(x), phi)
            dphi = np.where(rise, smoothstep_d(x) / (re - lo), dphi)
        phi = np.where((col >= re) & (col <= fs), 1.0, phi)
        fall = (col > fs) & (col < hi)
        if fall.any():
            x = np.where(fall, (hi - col) / (hi - fs), 0.5)
            phi = np.where(fall, smoothstep(x), phi)
            dphi = np.where(fall, -smoothstep_d(x) / (hi - fs), dphi)
        u = np.sum(self.weights * phi, axis=1)
        u_rho = np.sum(self.weights * dphi, axis=1)
        return u, u_rho


def build_radial_structure(
    traces: MotionTraces,
    n_samples: int = 256,
    n_rays: int = 64,
    monotone_margin: float = 0.05,
) -> RadialStructure:
    """Construct the displacement field interpolating every marked trace.

    Marked point j rides the ray through z_j: at each boundary sample the
    bump centered at (|w_j(xi)|, arg z_j) carries exactly the angular offset
    arg w_j(xi) - arg z_j.  Points sharing a ray get radially disjoint bumps.
    """
    traces.validate()
    radii = compute_radii(traces, n_angles=max(256, n_samples))
    r, R = radii.r, radii.R
    nodes = unit_nodes(n_samples)
    vals = traces.evaluate(nodes).T          # (N, J)
    base = traces.basepoints()
    theta_j = np.angle(base)
    d = _wrap_angle(np.angle(vals) - theta_j[None, :])
    if np.any(np.abs(d) > np.pi / 2):
        raise MonotonicityViolation(
            "a trace swings more than pi/2 around its base ray; "
            "the angular-displacement construction does not apply"
        )
    rho_star = np.abs(vals)

    # angular widths from gaps between distinct base angles
    order = np.argsort(theta_j)
    distinct: list[float] = []
    groups: list[list[int]] = []
    for idx in order:
        ang = float(theta_j[idx])
        if distinct and abs(_wrap_angle(np.array([ang - distinct[-1]]))[0]) < 1e-9:
            groups[-1].append(idx)
        else:
            distinct.append(ang)
            groups.append([idx])
    # circular wrap: first and last distinct angles may coincide mod 2 pi
    if len(distinct) > 1 and abs(_wrap_angle(np.array([distinct[0] - distinct[-1]]))[0]) < 1e-9:
        groups[0].extend(groups.pop())
        distinct.pop()

    widths = np.empty(len(base), dtype=float)
    if len(distinct) == 1:
        for g in groups:
            for j in g:
                widths[j] = np.pi
    else:
        arr = np.array(distinct)
        for gi, g in enumerate(groups):
            prev_gap = abs(_wrap_angle(np.array([arr[gi] - arr[gi - 1]]))[0])
            next_gap = abs(_wrap_angle(np.array([arr[(gi + 1) % len(arr)] - arr[gi]]))[0])
            h = 0.45 * min(prev_gap, next_gap)
            for j in g:
                widths[j] = h

    n_pts = len(base)
    n = n_samples
    lo = np.full((n, n_pts), 2 * r)
    rise_end = np.full((n, n_pts), 3 * r)
    fall_start = np.full((n, n_pts), R - 1.0)
    hi = np.full((n, n_pts), R)

    for g in groups:
        if len(g) < 2:
            continue
        cols = np.array(g)
        rhos = rho_star[:, cols]            # (N, len(g))
        order_k = np.argsort(rhos, axis=1)
        sorted_rho = np.take_along_axis(rhos, order_k, axis=1)
        if np.any(np.diff(sorted_rho, axis=1) <= 1e-9 * R):
            raise MonotonicityViolation(
                "two traces share a ray at coinciding radii; curves through "
                "them cannot be disjoint"
            )
        mids = np.sqrt(sorted_rho[:, :-1] * sorted_rho[:, 1:])
        for pos in range(len(g)):
            col = np.take_along_axis(cols[None, :], order_k, axis=1)[:, pos]
            rows = np.arange(n)
            rho_here = sorted_rho[:, pos]
            if pos > 0:
                lo[rows, col] = mids[:, pos - 1]
                rise_end[rows, col] = rho_here
            if pos < len(g) - 1:
                fall_start[rows, col] = rho_here
                hi[rows, col] = mids[:, pos]

    structure = RadialStructure(
        radii=radii,
        boundary_nodes=nodes,
        ray_angles=np.linspace(-np.pi, np.pi, n_rays, endpoint=False),
        traces=traces,
        base_angles=theta_j,
        psi_widths=widths,
        displacement=d,
        rho_marks=rho_star,
        phi_lo=lo,
        phi_rise_end=rise_end,
        phi_fall_start=fall_start,
        phi_hi=hi,
    )
    structure.check_monotone(margin=monotone_margin)
    eps, c = _stolz_margin(structure)
    structure.stolz_epsilon = eps
    structure.stolz_c = c
    return structure


def _stolz_margin(rs: RadialStructure, n_rho: int = 48) -> tuple[float, float]:
    """Cone margin (epsilon, c): curves enter the rim inside Stolz cones.

    Outer band [R - c, R): ratio (R - rho)/|zeta - z(rho)|.  The inner band
    is exactly radial by construction, so its margin is 1.
    """
    R = rs.radii.R
    c = 0.5
    rho_grid = np.linspace(R - c, R - 1e-9, n_rho)
    eps = 1.0
    for theta in rs.ray_angles:
        zeta = R * np.exp(1j * theta)
        ray = rs.ray_slice(float(theta))
        if not ray.active:
            continue
        for rho in rho_grid:
            u, _ = ray(np.full(rs.n_boundary, rho))
            z = rho * np.exp(1j * (theta + u))
            denom = np.maximum(np.abs(zeta - z), 1e-300)
            eps = min(eps, float(((R - rho) / denom).min()))
    return eps, c


# ---------------------------------------------------------------------------
# field accessors
# ---------------------------------------------------------------------------

def tangent_field(
    rs: RadialStructure, k: int, z: complex, inward: bool = False
) -> complex:
    """Unit tangent of the curve through z at boundary sample k.

    Default orientation points outward along increasing radius, matching
    tau = (z/|z|) e^{i alpha}; pass inward=True for the parametrization that
    runs from the rim label toward 0 (the stored curve order).
    """
    rho = abs(z)
    _require_annulus(rs, rho)
    alpha = angle_field(rs, k, z)
    tau = (z / rho) * np.exp(1j * alpha)
    return complex(-tau if inward else tau)


def angle_field(rs: RadialStructure, k: int, z: complex) -> float:
    """Angle alpha between the outward curve tangent and the radial direction.

    Continuous branch with alpha = arctan(rho du/drho), which sits in
    (-pi/2, pi/2) everywhere, in particular on |z| = R.
    """
    rho = abs(z)
    _require_annulus(rs, rho)
    theta0 = rs.ray_label(k, z)
    _, u_rho, _ = rs.displacement_field(np.array([k]), np.array([rho]), theta0)
    return float(np.arctan(rho * u_rho[0]))


def _require_annulus(rs: RadialStructure, rho: float) -> None:
    if not rs.radii.r - 1e-12 <= rho <= rs.radii.R + 1e-12:
        raise ValueError(
            f"|z| = {rho} outside the flow annulus [{rs.radii.r}, {rs.radii.R}]"
        )


# ---------------------------------------------------------------------------
# lemma verification
# ---------------------------------------------------------------------------

@dataclass
class LemmaReport:
    """Grid verification of the curve-family properties (1)-(7)."""

    items: dict[int, tuple[str, bool | None, str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.items.values() if ok is not None)

    def to_dict(self) -> dict:
        return {
            str(num): {"property": name, "passed": ok, "detail": detail}
            for num, (name, ok, detail) in sorted(self.items.items())
        }


def verify_lemma_properties(
    rs: RadialStructure,
    n_rho: int = 128,
    incidence_tol: float = 1e-8,
    fd_tol: float = 1e-6,
) -> LemmaReport:
    """Check the curve-family properties on the structure's grids.

    (1) endpoints and differentiability, (2) the family covers the disk,
    (3) pairwise disjointness away from 0, (4) marked-trace incidence,
    (5) straightness inside radius 2r, (6) boundary identifications (not
    applicable over the disk), (7) positive Stolz margin.
    """
    report = LemmaReport()
    r, R = rs.radii.r, rs.radii.R
    k_probe = np.linspace(0, rs.n_boundary - 1, min(16, rs.n_boundary), dtype=int)
    theta_probe = rs.ray_angles[:: max(1, rs.n_rays // 16)]

    # (1) endpoints exact; finite-difference tangent matches the field
    worst_end = 0.0
    worst_fd = 0.0
    rho_grid = np.linspace(r, R, n_rho)
    h = 1e-5 * R
    for k in k_probe:
        for theta in theta_probe:
            zeta = R * np.exp(1j * theta)
            end = rs.curve_point(int(k), float(theta), np.array([R]))[0]
            worst_end = max(worst_end, abs(end - zeta))
            inner = rho_grid[(rho_grid > r + h) & (rho_grid < R - h)]
            pts_p = rs.curve_point(int(k), float(theta), inner + h)
            pts_m = rs.curve_point(int(k), float(theta), inner - h)
            fd = (pts_p - pts_m) / (2 * h)
            fd_unit = fd / np.abs(fd)
            kk = np.full(inner.shape, int(k))
            u, u_rho, _ = rs.displacement_field(kk, inner, float(theta))
            slope = 1.0 + 1j * inner * u_rho
            tau = np.exp(1j * (float(theta) + u)) * slope / np.abs(slope)
            worst_fd = max(worst_fd, float(np.abs(tau - fd_unit).max()))
    report.items[1] = (
        "differentiable arc from 0 to the rim label",
        worst_end < 1e-12 and worst_fd < fd_tol,
        f"endpoint error {worst_end:.2e}, tangent mismatch {worst_fd:.2e}",
    )

    # (2) coverage: the label map is onto (round-trip through ray_label)
    worst_cover = 0.0
    cover_detail = None
    targets = np.linspace(-np.pi, np.pi, 17)[:-1]
    for k in k_probe:
        for rho in (2.5 * r, 0.5 * (3 * r + R), R - 0.25):
            for phi in targets:
                z = rho * np.exp(1j * phi)
                try:
                    theta0 = rs.ray_label(int(k), z)
                except RuntimeError as exc:
                    cover_detail = str(exc)
                    break
                zz = rs.curve_point(int(k), theta0, np.array([rho]))[0]
                worst_cover = max(worst_cover, abs(zz - z))
    report.items[2] = (
        "curves sweep the whole disk",
        cover_detail is None and worst_cover < 1e-9,
        cover_detail or f"round-trip error {worst_cover:.2e}",
    )

    # (3) disjointness away from 0: strict circle-map monotonicity
    try:
        margin = rs.check_monotone(margin=0.0)
        ok3, detail3 = True, f"min circle-map derivative {margin:.3f}"
    except MonotonicityViolation as exc:
        ok3, detail3 = False, str(exc)
    report.items[3] = ("pairwise disjoint away from 0", ok3, detail3)

    # (4) marked-point incidence
    worst_inc = 0.0
    vals = rs.traces.evaluate(rs.boundary_nodes).T
    all_k = np.arange(rs.n_boundary)
    for j in range(rs.n_marked):
        theta = float(rs.base_angles[j])
        targets = vals[:, j]
        u, _, _ = rs.displacement_field(all_k, np.abs(targets), theta)
        z = np.abs(targets) * np.exp(1j * (theta + u))
        worst_inc = max(worst_inc, float(np.abs(z - targets).max()))
    report.items[4] = (
        "curves pass through the marked traces",
        worst_inc < incidence_tol,
        f"max incidence distance {worst_inc:.2e}",
    )

    # (5) straight inside radius 2r (hence agrees with the ray on [0, r])
    inner_rho = np.linspace(1e-6, 2 * r, 32)
    worst_inner = 0.0
    for k in k_probe:
        for theta in theta_probe:
            kk = np.full(inner_rho.shape, int(k))
            u, _, _ = rs.displacement_field(kk, inner_rho, float(theta))
            worst_inner = max(worst_inner, float(np.abs(u).max()))
    report.items[5] = (
        "straight segments inside the inner disk",
        worst_inner == 0.0,
        f"max |u| on [0, 2r] = {worst_inner:.2e}",
    )

    report.items[6] = (
        "matching curves across identified boundary points",
        None,
        "not applicable over the disk",
    )

    report.items[7] = (
        "positive Stolz margin at the rims",
        rs.stolz_epsilon > 0.0,
        f"epsilon = {rs.stolz_epsilon:.4f} at c = {rs.stolz_c}",
    )
    return report
