import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holomotion.circle import (
    AnalyticBoundaryFunction,
    BandLimitWarning,
    BoundaryFunction,
    analyticity_residual,
    cauchy_eval,
    cauchy_eval_many,
    hilbert_transform,
    holder_half_seminorm,
    poisson_eval,
    project_analytic,
    top_band_energy_fraction,
    unit_nodes,
)

N = 512
NODES = unit_nodes(N)
THETA = np.angle(NODES)


def real_bf(values) -> BoundaryFunction:
    return BoundaryFunction(np.asarray(values, dtype=float).astype(complex))


class TestConstruction:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            BoundaryFunction(np.zeros(100, dtype=complex))

    def test_rejects_small_grid(self):
        with pytest.raises(ValueError):
            BoundaryFunction(np.zeros(32, dtype=complex))

    def test_round_trip_samples_coefficients(self):
        rng = np.random.default_rng(0)
        f = BoundaryFunction(rng.normal(size=N) + 1j * rng.normal(size=N))
        back = BoundaryFunction.from_coefficients(f.coefficients)
        scale = np.abs(f.samples).max()
        assert np.abs(back.samples - f.samples).max() < 1e-12 * scale

    def test_coefficient_lookup(self):
        f = BoundaryFunction(NODES**3)
        assert abs(f.coefficient(3) - 1) < 1e-12
        assert abs(f.coefficient(-3)) < 1e-12
        assert f.coefficient(N) == 0

    def test_analytic_subclass_validates(self):
        AnalyticBoundaryFunction(NODES**2)
        with pytest.raises(ValueError, match="residual"):
            AnalyticBoundaryFunction(np.conj(NODES))


class TestHilbertTransform:
    def test_constant_maps_to_zero(self):
        out = hilbert_transform(real_bf(np.full(N, 3.7)))
        assert np.abs(out.samples).max() < 1e-12

    def test_cos_to_sin_all_bands(self):
        worst = 0.0
        for k in range(1, N // 4 + 1):
            out = hilbert_transform(real_bf(np.cos(k * THETA)))
            worst = max(worst, np.abs(out.samples - np.sin(k * THETA)).max())
        assert worst < 1e-10

    def test_sin_to_minus_cos(self):
        out = hilbert_transform(real_bf(np.sin(THETA)))
        assert np.abs(out.samples + np.cos(THETA)).max() < 1e-10

    def test_rejects_complex_input(self):
        with pytest.raises(ValueError, match="real"):
            hilbert_transform(BoundaryFunction(NODES))

    def test_double_transform_is_minus_centered_identity(self):
        rng = np.random.default_rng(5)
        coef = np.zeros(N, dtype=complex)
        modes = np.fft.fftfreq(N, 1.0 / N).astype(int)
        band = np.abs(modes) <= N // 8
        coef[band] = rng.normal(size=band.sum()) + 1j * rng.normal(size=band.sum())
        f = real_bf(BoundaryFunction.from_coefficients(coef).samples.real)
        out = hilbert_transform(hilbert_transform(f))
        target = -(f.samples - f.samples.mean())
        assert np.abs(out.samples - target).max() < 1e-10

    def test_analytic_completion(self):
        f = real_bf(np.cos(2 * THETA) + 0.5 * np.sin(5 * THETA))
        completed = BoundaryFunction(
            f.samples + 1j * hilbert_transform(f).samples
        )
        assert analyticity_residual(completed) < 1e-10

    @given(st.floats(min_value=-3, max_value=3), st.floats(min_value=-3, max_value=3))
    @settings(max_examples=50)
    def test_linearity(self, a, b):
        f = real_bf(np.cos(2 * THETA))
        g = real_bf(np.sin(7 * THETA))
        lhs = hilbert_transform(real_bf(a * f.samples.real + b * g.samples.real))
        rhs = a * hilbert_transform(f).samples + b * hilbert_transform(g).samples
        assert np.abs(lhs.samples - rhs).max() < 1e-9 * (1 + abs(a) + abs(b))


class TestPoisson:
    def test_constant(self):
        f = BoundaryFunction(np.full(N, 2.0 - 1.0j))
        for lam in (0, 0.3, 0.5j, -0.2 + 0.7j):
            assert abs(poisson_eval(f, lam) - (2.0 - 1.0j)) < 1e-12

    def test_center_is_mean(self):
        rng = np.random.default_rng(1)
        f = BoundaryFunction(rng.normal(size=N).astype(complex))
        assert abs(poisson_eval(f, 0) - f.samples.mean()) < 1e-12

    def test_cos_k_along_radius(self):
        f = real_bf(np.cos(3 * THETA))
        for rho in (0.2, 0.5, 0.9):
            assert abs(poisson_eval(f, rho) - rho**3) < 1e-12

    def test_rejects_boundary_point(self):
        f = real_bf(np.cos(THETA))
        with pytest.raises(ValueError):
            poisson_eval(f, 1.0)

    def test_boundary_approach_bound(self):
        f = real_bf(np.cos(2 * THETA) + 0.3 * np.sin(6 * THETA))
        modes = f.modes()
        deriv_norm = float(np.sum(np.abs(modes) * np.abs(f.coefficients)))
        for rho in (0.9, 0.99, 0.999):
            err = abs(poisson_eval(f, rho * NODES[7]) - f.samples[7])
            assert err <= (1 - rho) * deriv_norm + 1e-12


class TestCauchy:
    def test_identity_function(self):
        f = BoundaryFunction(NODES)
        assert abs(cauchy_eval(f, 0.5) - 0.5) < 1e-12

    def test_constant(self):
        f = BoundaryFunction(np.full(N, 1.5 + 0.5j))
        assert abs(cauchy_eval(f, 0.3 + 0.4j) - (1.5 + 0.5j)) < 1e-12

    def test_agrees_with_poisson_on_analytic(self):
        coef = np.zeros(N, dtype=complex)
        coef[0], coef[1], coef[4] = 1.0, 0.5, 0.25j
        f = BoundaryFunction.from_coefficients(coef)
        for lam in (0.5, -0.3 + 0.6j, 0.1j):
            assert abs(cauchy_eval(f, lam) - poisson_eval(f, lam)) < 1e-10

    def test_rejects_non_analytic(self):
        with pytest.raises(ValueError, match="analytic"):
            cauchy_eval(BoundaryFunction(np.conj(NODES)), 0.5)

    def test_vectorized_matches_scalar(self):
        f = BoundaryFunction(NODES**2 + 0.5 * NODES)
        lams = np.array([0.1, 0.5j, -0.4 + 0.2j])
        many = cauchy_eval_many(f, lams)
        for lam, got in zip(lams, many):
            assert abs(got - cauchy_eval(f, lam)) < 1e-13


class TestResiduals:
    def test_analytic_monomial(self):
        assert analyticity_residual(BoundaryFunction(NODES**2)) < 1e-14

    def test_antianalytic(self):
        assert abs(analyticity_residual(BoundaryFunction(np.conj(NODES))) - 1.0) < 1e-14

    def test_balanced_mix(self):
        f = BoundaryFunction(NODES + np.conj(NODES))
        assert abs(analyticity_residual(f) - 1 / np.sqrt(2)) < 1e-12

    def test_projection_kills_residual(self):
        f = BoundaryFunction(NODES + 0.5 * np.conj(NODES))
        assert analyticity_residual(project_analytic(f)) < 1e-14


class TestHolderSeminorm:
    def test_constant_is_zero(self):
        assert holder_half_seminorm(BoundaryFunction(np.full(64, 5.0 + 1j))) == 0.0

    def test_identity_bounded_by_sqrt2(self):
        value = holder_half_seminorm(BoundaryFunction(unit_nodes(128)))
        assert value <= np.sqrt(2) + 1e-12
        assert value > 1.0

    def test_scale_linear(self):
        f = BoundaryFunction(unit_nodes(64) ** 2)
        g = BoundaryFunction(2 * unit_nodes(64) ** 2)
        assert abs(holder_half_seminorm(g) - 2 * holder_half_seminorm(f)) < 1e-12


class TestBandGuard:
    def test_quiet_for_low_frequency(self):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error", BandLimitWarning)
            hilbert_transform(real_bf(np.cos((N // 4) * THETA)))

    def test_warns_on_top_band_energy(self):
        k = 3 * N // 8 + 8
        with pytest.warns(BandLimitWarning):
            hilbert_transform(real_bf(np.cos(k * THETA)))

    def test_fraction_measurement(self):
        f = real_bf(np.cos((3 * N // 8 + 4) * THETA))
        assert top_band_energy_fraction(f) > 0.9
        assert top_band_energy_fraction(real_bf(np.cos(THETA))) < 1e-12


class TestCsvDump:
    def test_writes_headers_and_rows(self, tmp_path):
        f = BoundaryFunction(unit_nodes(64))
        sp, cp = tmp_path / "s.csv", tmp_path / "c.csv"
        f.to_csv(sp, cp)
        s_lines = sp.read_text().splitlines()
        c_lines = cp.read_text().splitlines()
        assert s_lines[0] == "k,re,im"
        assert c_lines[0] == "m,re,im"
        assert len(s_lines) == 65 and len(c_lines) == 65
        k, re, im = s_lines[1].split(",")
        assert float(re) == 1.0 and float(im) == 0.0


class TestLinearityOfEvaluations:
    def test_poisson_superposition(self):
        rng = np.random.default_rng(21)
        f = BoundaryFunction(rng.normal(size=N) + 1j * rng.normal(size=N))
        g = BoundaryFunction(rng.normal(size=N) + 1j * rng.normal(size=N))
        for _ in range(10):
            a, b = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
            lam = rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform())
            combo = BoundaryFunction(a * f.samples + b * g.samples)
            lhs = poisson_eval(combo, lam)
            rhs = a * poisson_eval(f, lam) + b * poisson_eval(g, lam)
            assert abs(lhs - rhs) < 1e-10 * (1 + abs(a) + abs(b))
