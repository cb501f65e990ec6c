"""Function-space flow that threads boundary functions along the radial curves.

States are boundary values of holomorphic functions; the generating field

    F(g) = g * exp(-T[beta(g)] + i P[beta(g)]),    beta(g)(xi) = alpha(xi, g(xi))

moves every boundary sample along its own curve (P restricted to the boundary
is the identity, so the boundary form is |F| times the outward unit tangent).
Time zero is the constant state at a rim label; interior targets are reached
by integrating backward, so reported times satisfy t(z) <= 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .circle import (
    AnalyticBoundaryFunction,
    BoundaryFunction,
    analyticity_residual,
    cauchy_eval_many,
)
from .radial import MotionTraces, RadialStructure, RaySlice, build_radial_structure

STEP_CAP = 0.05
DEFAULT_DT = 1e-2
CROSS_TRACK_TOL = 1e-6
MIN_DT = 1e-7


class OutsideFlowRegion(ValueError):
    """Target point is outside the annulus the flow sweeps."""


class FlowDomainError(RuntimeError):
    """A state left the admissible band r < |g| < R + delta."""


class DriftExceeded(RuntimeError):
    """A single step drifted off the curve family by more than 10x tolerance."""


@dataclass(frozen=True)
class FlowState:
    """Flow snapshot: time, ray label, and boundary samples of g_t."""

    t: float
    theta0: float
    g: np.ndarray
    drift: float = 0.0

    @property
    def n(self) -> int:
        return self.g.size

    def mean(self) -> complex:
        return complex(np.mean(self.g))

    def anchor(self) -> complex:
        """Boundary value at the sample xi = 1."""
        return complex(self.g[0])

    def boundary_function(self) -> AnalyticBoundaryFunction:
        return AnalyticBoundaryFunction(self.g)


def _hilbert_samples(values: np.ndarray) -> np.ndarray:
    """Conjugate-function transform of real samples (c_0 -> 0), real output."""
    n = values.size
    coef = np.fft.fft(values)
    modes = np.fft.fftfreq(n, d=1.0 / n)
    return np.fft.ifft(-1j * np.sign(modes) * coef).real


def _delta_margin(rs: RadialStructure) -> float:
    """Half the gap between the rim and the largest trace radius, floored."""
    reach = float(rs.rho_marks.max()) if rs.rho_marks.size else rs.radii.R - 1.0
    return max(0.5 * (rs.radii.R - reach), 1e-3)


def _field_samples(ray: RaySlice, g: np.ndarray) -> np.ndarray:
    rho = np.abs(g)
    _, u_rho = ray(rho)
    if not ray.active:
        return g.copy()
    beta = np.arctan(rho * u_rho)
    return g * np.exp(-_hilbert_samples(beta) + 1j * beta)


def vector_field_F(state: FlowState, rs: RadialStructure) -> BoundaryFunction:
    """The generating field at the state, as a boundary function."""
    _check_in_band(rs, state.g)
    return BoundaryFunction(_field_samples(rs.ray_slice(state.theta0), state.g))


def _check_in_band(rs: RadialStructure, g: np.ndarray) -> None:
    rho = np.abs(g)
    delta = _delta_margin(rs)
    if float(rho.min()) <= rs.radii.r or float(rho.max()) >= rs.radii.R + delta:
        raise FlowDomainError(
            f"state radius range [{rho.min():.6f}, {rho.max():.6f}] outside "
            f"({rs.radii.r:.6f}, {rs.radii.R + delta:.6f})"
        )


def _project_state(ray: RaySlice, g: np.ndarray) -> tuple[np.ndarray, float]:
    """Snap samples back onto their curves, then onto the analytic spectrum."""
    rho = np.abs(g)
    u, _ = ray(rho)
    on_curve = rho * np.exp(1j * (ray.theta0 + u))
    drift = float(np.abs(g - on_curve).max())
    coef = np.fft.fft(on_curve)
    modes = np.fft.fftfreq(g.size, d=1.0 / g.size)
    coef[modes < 0] = 0
    return np.fft.ifft(coef), drift


def _rk4(ray: RaySlice, g: np.ndarray, dt: float, k1: np.ndarray | None = None):
    if k1 is None:
        k1 = _field_samples(ray, g)
    k2 = _field_samples(ray, g + 0.5 * dt * k1)
    k3 = _field_samples(ray, g + 0.5 * dt * k2)
    k4 = _field_samples(ray, g + dt * k3)
    return g + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4), k1


def flow_step(
    state: FlowState,
    dt: float,
    rs: RadialStructure,
    tol: float = CROSS_TRACK_TOL,
) -> FlowState:
    """One classical Runge-Kutta step followed by the two re-projections.

    The cross-track correction is recorded on the returned state; a
    correction above 10x tolerance aborts.
    """
    if abs(dt) > STEP_CAP:
        raise ValueError(f"|dt| = {abs(dt)} exceeds the step cap {STEP_CAP}")
    _check_in_band(rs, state.g)
    if dt == 0.0:
        return state
    ray = rs.ray_slice(state.theta0)
    raw, _ = _rk4(ray, state.g, dt)
    _check_in_band(rs, raw)
    projected, drift = _project_state(ray, raw)
    if drift > 10.0 * tol:
        raise DriftExceeded(
            f"cross-track drift {drift:.3e} exceeds 10x tolerance {tol:.1e}"
        )
    return FlowState(t=state.t + dt, theta0=state.theta0, g=projected, drift=drift)


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

class RayFlow:
    """Backward trajectory from the constant rim state along one ray.

    Stores every accepted state together with its field value, giving cubic
    Hermite dense output between checkpoints; anchor radii decrease strictly
    along the trajectory, so time-to-point queries reduce to scalar
    root-finds on the interpolant.
    """

    def __init__(
        self,
        rs: RadialStructure,
        theta0: float,
        dt0: float = DEFAULT_DT,
        tol: float = CROSS_TRACK_TOL,
    ):
        self.rs = rs
        self.theta0 = float(theta0)
        self.dt0 = dt0
        self.tol = tol
        self.max_drift = 0.0
        self.sup_violation = 0.0
        self._integrate()

    def _integrate(self) -> None:
        rs = self.rs
        ray = rs.ray_slice(self.theta0)
        self._ray = ray
        r, R = rs.radii.r, rs.radii.R
        n = rs.n_boundary
        delta = _delta_margin(rs)
        g = np.full(n, R * np.exp(1j * self.theta0), dtype=complex)
        t = 0.0
        times = [t]
        states = [g]
        fields = [_field_samples(ray, g)]
        dt = -abs(self.dt0)
        stop_radius = r + 1e-4 * R
        while float(np.abs(g).min()) > stop_radius:
            raw, _ = _rk4(ray, g, dt, k1=fields[-1])
            rho = np.abs(raw)
            if float(rho.min()) <= r or float(rho.max()) >= R + delta:
                if abs(dt) <= MIN_DT:
                    raise FlowDomainError("state left the admissible band")
                dt *= 0.5
                continue
            projected, drift = _project_state(ray, raw)
            if drift > self.tol:
                if abs(dt) <= MIN_DT:
                    raise DriftExceeded(
                        f"drift {drift:.3e} above tolerance at minimal step"
                    )
                dt *= 0.5
                continue
            g = projected
            t += dt
            times.append(t)
            states.append(g)
            fields.append(_field_samples(ray, g))
            self.max_drift = max(self.max_drift, drift)
            sup = float(np.abs(g).max())
            if sup >= R - 1e-8:
                spread = float(np.abs(g - np.mean(g)).max())
                if spread > 1e-6 * R:
                    self.sup_violation = max(self.sup_violation, spread)
            if drift < self.tol / 32 and abs(dt) < abs(self.dt0):
                dt = -min(abs(self.dt0), 2 * abs(dt))
        self.times = np.array(times)
        self.states = states
        self.fields = fields
        self.anchor_radii = np.array([abs(s[0]) for s in states])
        self.means = np.array([np.mean(s) for s in states])
        self.mean_fields = np.array([np.mean(f) for f in fields])
        self.anchors = np.array([s[0] for s in states])
        self.anchor_fields = np.array([f[0] for f in fields])
        self.final_gap = float(
            np.abs(states[-1] - r * np.exp(1j * self.theta0)).max()
        )

    @property
    def t_min(self) -> float:
        return float(self.times[-1])

    def _segment(self, t: float) -> int:
        """Checkpoint index whose segment [times[i+1], times[i]] contains t."""
        idx = int(np.searchsorted(-self.times, -t, side="right")) - 1
        return min(max(idx, 0), len(self.times) - 2)

    @staticmethod
    def _hermite(y0, f0, y1, f1, dt, s):
        """Cubic Hermite value at fraction s of a step of signed length dt."""
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s**2 * (3 - 2 * s)
        h11 = s**2 * (s - 1)
        return h00 * y0 + h10 * dt * f0 + h01 * y1 + h11 * dt * f1

    def state_at_time(self, t: float) -> FlowState:
        if t > 0 or t < self.t_min:
            raise OutsideFlowRegion(f"time {t} outside [{self.t_min}, 0]")
        i = self._segment(t)
        dt = self.times[i + 1] - self.times[i]
        s = (t - self.times[i]) / dt
        g = self._hermite(
            self.states[i], self.fields[i], self.states[i + 1], self.fields[i + 1], dt, s
        )
        return FlowState(t=float(t), theta0=self.theta0, g=g)

    def _scalar_time_root(self, values, fields, target_abs: float) -> float:
        """Time at which |scalar interpolant| = target along the trajectory."""
        mags = np.abs(values)
        if target_abs > mags[0] + 1e-12 or target_abs < mags[-1] - 1e-12:
            raise OutsideFlowRegion(
                f"target radius {target_abs} outside the swept range "
                f"[{mags[-1]:.6f}, {mags[0]:.6f}]"
            )
        i = int(np.searchsorted(-mags, -target_abs, side="right")) - 1
        i = min(max(i, 0), len(mags) - 2)
        dt = self.times[i + 1] - self.times[i]
        lo, hi = 0.0, 1.0
        f_lo = mags[i] - target_abs
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            val = self._hermite(values[i], fields[i], values[i + 1], fields[i + 1], dt, mid)
            f_mid = abs(val) - target_abs
            if f_lo * f_mid <= 0:
                hi = mid
            else:
                lo, f_lo = mid, f_mid
        return float(self.times[i] + 0.5 * (lo + hi) * dt)

    def state_at_anchor_radius(self, target: float) -> FlowState:
        """State whose boundary value at xi = 1 has the given radius."""
        t = self._scalar_time_root(self.anchors, self.anchor_fields, target)
        return self.state_at_time(t)

    def state_at_mean_radius(self, target: float) -> FlowState:
        """State whose disk-center value (the coefficient mean) has the radius."""
        mr = np.abs(self.means)
        if np.any(np.diff(mr) > 1e-9 * self.rs.radii.R):
            raise FlowDomainError("mean radius is not monotone along the ray")
        t = self._scalar_time_root(self.means, self.mean_fields, target)
        return self.state_at_time(t)


def integrate_to_point(
    rs: RadialStructure,
    z: complex,
    dt0: float = DEFAULT_DT,
    tol: float = CROSS_TRACK_TOL,
    _cache: dict | None = None,
) -> tuple[complex, float, AnalyticBoundaryFunction]:
    """Unique (rim label, time, state) with boundary anchor g(1) = z.

    z must satisfy r < |z| <= R: below the inner radius the only admissible
    states are constants and the flow never reaches them.
    """
    r, R = rs.radii.r, rs.radii.R
    rho = abs(z)
    if rho <= r:
        raise OutsideFlowRegion(f"|z| = {rho} <= r = {r}")
    if rho > R + 1e-12:
        raise OutsideFlowRegion(f"|z| = {rho} > R = {R}")
    theta0 = rs.ray_label(0, z)
    zeta = R * np.exp(1j * theta0)
    if abs(rho - R) < 1e-12:
        g = np.full(rs.n_boundary, zeta, dtype=complex)
        return complex(zeta), 0.0, AnalyticBoundaryFunction(g)
    if _cache is not None and theta0 in _cache:
        ray = _cache[theta0]
    else:
        ray = RayFlow(rs, theta0, dt0=dt0, tol=tol)
        if _cache is not None:
            _cache[theta0] = ray
    state = ray.state_at_anchor_radius(rho)
    return complex(zeta), state.t, state.boundary_function()


def psi(
    rs: RadialStructure,
    lam: complex,
    z: complex,
    dt0: float = DEFAULT_DT,
    tol: float = CROSS_TRACK_TOL,
) -> complex:
    """Slice map value g_{t(z)}(lam); the identity off the flow annulus."""
    rho = abs(z)
    if rho <= rs.radii.r or rho > rs.radii.R:
        return complex(z)
    _, _, g = integrate_to_point(rs, z, dt0=dt0, tol=tol)
    return complex(cauchy_eval_many(g, np.array([lam]))[0])


# ---------------------------------------------------------------------------
# the assembled extension
# ---------------------------------------------------------------------------

class ExtendedMotion:
    """Evaluator (lam, z) -> extended motion value, with certificates.

    Values at the basepoint lam = 0 reproduce z by construction; marked
    traces are reproduced up to the discretization residuals reported by
    the certificates.
    """

    def __init__(
        self,
        traces: MotionTraces,
        n_samples: int = 256,
        n_rays: int = 64,
        dt0: float = DEFAULT_DT,
        tol: float = CROSS_TRACK_TOL,
    ):
        self.traces = traces
        self.structure = build_radial_structure(traces, n_samples, n_rays)
        self.dt0 = dt0
        self.tol = tol
        self._rays: dict[float, RayFlow] = {}

    # -- plumbing ------------------------------------------------------------

    def ray_flow(self, theta0: float) -> RayFlow:
        key = float(theta0)
        if key not in self._rays:
            self._rays[key] = RayFlow(
                self.structure, key, dt0=self.dt0, tol=self.tol
            )
        return self._rays[key]

    def in_flow_annulus(self, z: complex) -> bool:
        return self.structure.radii.r < abs(z) <= self.structure.radii.R

    def state_for_target(self, z: complex, angle_tol: float = 1e-11) -> FlowState:
        """State whose disk-center value equals z (the inverse basepoint slice).

        Solves the two-parameter problem (ray label, time) by a secant
        iteration on the label around arg z with a time root-find inside.
        """
        target_rho = abs(z)
        target_arg = float(np.angle(z))

        def residual(theta0: float) -> tuple[float, FlowState]:
            state = self.ray_flow(theta0).state_at_mean_radius(target_rho)
            err = float(np.angle(state.mean() * np.exp(-1j * target_arg)))
            return err, state

        theta_prev = target_arg
        err_prev, state = residual(theta_prev)
        if abs(err_prev) < angle_tol:
            return state
        theta_cur = theta_prev - err_prev
        err_cur = err_prev
        for _ in range(40):
            err_cur, state = residual(theta_cur)
            if abs(err_cur) < angle_tol:
                return state
            denom = err_cur - err_prev
            if denom == 0.0:
                break
            theta_next = theta_cur - err_cur * (theta_cur - theta_prev) / denom
            theta_prev, err_prev = theta_cur, err_cur
            theta_cur = theta_next
        raise RuntimeError(f"label iteration stalled at residual {err_cur:.3e}")

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, lam: complex, z: complex) -> complex:
        return complex(self.evaluate_many(np.array([lam]), z)[0])

    def evaluate_many(self, lams: np.ndarray, z: complex) -> np.ndarray:
        """Extended motion at one z for many parameter values."""
        lams = np.asarray(lams, dtype=complex)
        if not self.in_flow_annulus(z):
            return np.full(lams.shape, complex(z))
        state = self.state_for_target(z)
        return cauchy_eval_many(state.boundary_function(), lams)

    def __call__(self, lam: complex, z: complex) -> complex:
        return self.evaluate(lam, z)

    def psi0(self, z: complex) -> complex:
        """Basepoint slice: disk-center value of the state anchored at z."""
        if not self.in_flow_annulus(z):
            return complex(z)
        theta0 = self.structure.ray_label(0, z)
        state = self.ray_flow(theta0).state_at_anchor_radius(abs(z))
        return state.mean()

    def psi0_inverse(self, z: complex) -> complex:
        if not self.in_flow_annulus(z):
            return complex(z)
        return self.state_for_target(z).anchor()

    # -- certificates ------------------------------------------------------------

    def agreement_residual(self, lam_radii=(0.3, 0.6, 0.9), n_angles: int = 32) -> float:
        """Max deviation of the evaluator from the marked traces."""
        angles = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
        lams = np.concatenate(
            [[0.0 + 0j], (np.array(lam_radii)[:, None] * angles).ravel()]
        )
        worst = 0.0
        for j, z_j in enumerate(self.traces.basepoints()):
            got = self.evaluate_many(lams, complex(z_j))
            want = self.traces.evaluate(lams)[j]
            worst = max(worst, float(np.abs(got - want).max()))
        return worst

    def sample_states(self, n_radii: int = 8, rays=None) -> list[FlowState]:
        """Anchored states on a ray-by-radius grid (for pair certificates)."""
        rs = self.structure
        r, R = rs.radii.r, rs.radii.R
        radii = np.linspace(1.15 * r, 0.98 * R, n_radii)
        out = []
        for theta in (rs.ray_angles if rays is None else rays):
            ray = self.ray_flow(float(theta))
            for rho in radii:
                out.append(ray.state_at_anchor_radius(float(rho)))
        return out


@dataclass
class InjectivityReport:
    """Pairwise nonvanishing/winding evidence for injectivity."""

    n_pairs: int
    min_separation: float
    max_winding: int
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "n_pairs": self.n_pairs,
            "min_separation": self.min_separation,
            "max_winding": self.max_winding,
            "failures": self.failures,
            "passed": self.passed,
        }


def injectivity_certificate(
    em: ExtendedMotion,
    states: list[FlowState] | None = None,
    n_pairs: int = 1000,
) -> InjectivityReport:
    """For sampled state pairs: min |g - g'| > 0 on the boundary and the
    discrete winding of the difference around 0 vanishes.

    Explicitly supplied states must anchor at pairwise distinct points.
    """
    if states is None:
        n_rays = max(4, int(np.ceil(np.sqrt(2 * n_pairs) / 8)) * 8)
        rays = np.linspace(-np.pi, np.pi, n_rays, endpoint=False)
        states = em.sample_states(n_radii=8, rays=rays)
    else:
        anchors = np.array([s.anchor() for s in states])
        diffs = np.abs(anchors[:, None] - anchors[None, :])
        np.fill_diagonal(diffs, np.inf)
        if diffs.min() < 1e-12:
            raise ValueError("pair samples must anchor at distinct points")
    failures: list[str] = []
    min_sep = np.inf
    max_wind = 0
    count = 0
    for a, b in itertools.islice(itertools.combinations(states, 2), n_pairs):
        if abs(a.anchor() - b.anchor()) < 1e-12:
            continue
        diff = a.g - b.g
        sep = float(np.abs(diff).min())
        min_sep = min(min_sep, sep)
        count += 1
        if sep <= 0:
            failures.append(f"vanishing difference for pair at t={a.t}, t'={b.t}")
            continue
        phases = np.angle(diff)
        increments = np.angle(np.exp(1j * np.diff(np.append(phases, phases[0]))))
        winding = int(round(float(np.sum(increments)) / (2 * np.pi)))
        max_wind = max(max_wind, abs(winding))
        if winding != 0:
            failures.append(
                f"winding {winding} for pair anchored at {a.anchor():.4f}, {b.anchor():.4f}"
            )
    return InjectivityReport(
        n_pairs=count,
        min_separation=float(min_sep),
        max_winding=max_wind,
        failures=failures,
    )


def holomorphy_residual(
    evaluator,
    z: complex,
    n_lam: int = 64,
    radius: float = 0.9,
) -> float:
    """Relative negative-spectrum energy of lam -> evaluator(lam, z) on a circle."""
    lams = radius * np.exp(2j * np.pi * np.arange(n_lam) / n_lam)
    if isinstance(evaluator, ExtendedMotion):
        vals = evaluator.evaluate_many(lams, z)
    else:
        vals = np.array([evaluator(lam, z) for lam in lams], dtype=complex)
    return analyticity_residual(BoundaryFunction(vals))


def extend_motion(
    traces: MotionTraces,
    n_samples: int = 256,
    n_rays: int = 64,
    dt0: float = DEFAULT_DT,
    tol: float = CROSS_TRACK_TOL,
) -> ExtendedMotion:
    """Build the evaluator for the given traces (identity off the annulus)."""
    return ExtendedMotion(traces, n_samples=n_samples, n_rays=n_rays, dt0=dt0, tol=tol)
