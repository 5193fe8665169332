import math

import numpy as np
import pytest

from opasim.ensemble import (
    EnsembleConfig,
    GaussianState,
    QuadratureScan,
    VacuumConvention,
    default_thetas,
    propagate_ensemble,
    propagate_realization,
    sample_state,
    sample_state_array,
    scan_state,
    squeezing_report,
    variance_scan,
)
from opasim.fields import (
    QuadraturePair,
    TimeGrid,
    pump_carrier,
    quadratures_to_carrier,
    synthesize,
    carrier_to_quadratures,
)
from opasim.medium import SusceptibilityProfile, normalize_output, polarize
from opasim.spectral import lockin_extract

GRID = TimeGrid(64, 4)
VAC = VacuumConvention(1.0)
MEDIUM_R05 = SusceptibilityProfile(chi1=1.0, chi2=0.5)


def cfg(n=10_000, seed=777):
    return EnsembleConfig(n, seed, GRID, VAC)


class TestStateValidation:
    def test_ground_state(self):
        state = GaussianState.vacuum(VAC)
        assert state.mean == QuadraturePair(0.0, 0.0)
        assert np.array_equal(state.cov, np.eye(2))

    def test_rejects_non_psd(self):
        with pytest.raises(ValueError, match="positive semi-definite"):
            GaussianState(QuadraturePair(0, 0), [[1.0, 2.0], [2.0, 1.0]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            GaussianState(QuadraturePair(0, 0), [[1.0, 0.5], [0.1, 1.0]])

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EnsembleConfig(1, 0, GRID, VAC)
        with pytest.raises(ValueError):
            EnsembleConfig(10, -3, GRID, VAC)
        with pytest.raises(ValueError):
            VacuumConvention(0.0)


class TestSampling:
    def test_ground_state_moments(self):
        n = 100_000
        draws = sample_state_array(GaussianState.vacuum(VAC), cfg(n))
        bound = 4.0 * math.sqrt(VAC.var_zp / n)
        assert np.all(np.abs(draws.mean(axis=0)) < bound)
        assert np.all(
            np.abs(draws.var(axis=0, ddof=1) - 1.0) < 4.0 * math.sqrt(2.0 / n)
        )

    def test_displaced_vacuum_moments(self):
        n = 100_000
        state = GaussianState.coherent(QuadraturePair(3.0, 0.0), VAC)
        draws = sample_state_array(state, cfg(n))
        bound = 4.0 * math.sqrt(VAC.var_zp / n)
        assert abs(draws[:, 0].mean() - 3.0) < bound
        assert abs(draws[:, 1].mean()) < bound

    def test_degenerate_covariance_is_deterministic(self):
        state = GaussianState(QuadraturePair(1.5, -2.5), np.zeros((2, 2)))
        draws = sample_state_array(state, cfg(100))
        assert np.all(draws == np.array([1.5, -2.5]))

    def test_correlated_covariance_reproduced(self):
        cov = np.array([[2.0, 0.8], [0.8, 0.5]])
        state = GaussianState(QuadraturePair(0.0, 0.0), cov)
        draws = sample_state_array(state, cfg(200_000))
        sample_cov = np.cov(draws.T, ddof=1)
        np.testing.assert_allclose(sample_cov, cov, atol=0.03)

    def test_list_wrapper_matches_array(self):
        state = GaussianState.vacuum(VAC)
        pairs = sample_state(state, cfg(50))
        arr = sample_state_array(state, cfg(50))
        assert len(pairs) == 50
        assert pairs[7] == QuadraturePair(arr[7, 0], arr[7, 1])

    def test_slices_are_indexed_by_realization(self):
        state = GaussianState.vacuum(VAC)
        whole = sample_state_array(state, cfg(1000))
        tail = sample_state_array(state, cfg(1000), start=600, count=400)
        assert np.array_equal(whole[600:], tail)


class TestPropagation:
    def test_pump_off_is_identity(self):
        out = propagate_realization(
            QuadraturePair(0.7, -1.1), 0.0, 0.0, MEDIUM_R05, GRID
        )
        assert out.x1 == pytest.approx(0.7, abs=1e-12)
        assert out.x2 == pytest.approx(-1.1, abs=1e-12)

    def test_known_gain_point(self):
        # r = chi2*B/chi1 = 0.5 deamplifies x1 and amplifies x2
        out = propagate_realization(QuadraturePair(1.0, 1.0), 1.0, 0.0, MEDIUM_R05, GRID)
        assert out.x1 == pytest.approx(0.5, abs=1e-12)
        assert out.x2 == pytest.approx(1.5, abs=1e-12)

    def test_deamplification_of_cosine_input(self):
        out = propagate_realization(QuadraturePair(1.0, 0.0), 1.0, 0.0, MEDIUM_R05, GRID)
        assert out.x1 == pytest.approx(0.5, abs=1e-12)
        assert out.x2 == pytest.approx(0.0, abs=1e-12)

    def test_matches_explicit_chain(self):
        q = QuadraturePair(0.3, -0.9)
        series = synthesize(
            [quadratures_to_carrier(q), pump_carrier(1.2, 0.4)], GRID
        )
        medium = SusceptibilityProfile(chi1=1.1, chi2=0.4, eps0=1.6)
        chain = carrier_to_quadratures(
            lockin_extract(normalize_output(polarize(series, medium), medium), 1)
        )
        direct = propagate_realization(q, 1.2, 0.4, medium, GRID)
        assert direct == chain

    def test_batch_matches_single_realizations(self):
        draws = sample_state_array(GaussianState.vacuum(VAC), cfg(40))
        batch = propagate_ensemble(draws, 1.0, 0.3, MEDIUM_R05, GRID)
        for i in range(40):
            single = propagate_realization(
                QuadraturePair(draws[i, 0], draws[i, 1]), 1.0, 0.3, MEDIUM_R05, GRID
            )
            assert batch[i, 0] == single.x1
            assert batch[i, 1] == single.x2

    def test_worker_count_is_invisible(self):
        draws = sample_state_array(GaussianState.vacuum(VAC), cfg(9000))
        one = propagate_ensemble(draws, 1.0, 0.0, MEDIUM_R05, GRID, workers=1)
        many = propagate_ensemble(draws, 1.0, 0.0, MEDIUM_R05, GRID, workers=4)
        assert np.array_equal(one, many)

    def test_per_realization_oracle_equivalence(self):
        draws = sample_state_array(GaussianState.vacuum(VAC), cfg(5000))
        out = propagate_ensemble(draws, 1.0, 0.0, MEDIUM_R05, GRID)
        expected = draws * np.array([0.5, 1.5])
        assert np.max(np.abs(out - expected)) <= 1e-10

    def test_displacement_transforms_like_noise(self):
        # the mean obeys the same linear map as the fluctuations
        mean_in = QuadraturePair(2.0, -1.0)
        state = GaussianState.coherent(mean_in, VAC)
        draws = sample_state_array(state, cfg(4000))
        out = propagate_ensemble(draws, 1.0, 0.0, MEDIUM_R05, GRID)
        mean_only = propagate_realization(mean_in, 1.0, 0.0, MEDIUM_R05, GRID)
        assert mean_only.x1 == pytest.approx(0.5 * 2.0, abs=1e-12)
        assert mean_only.x2 == pytest.approx(1.5 * -1.0, abs=1e-12)
        # centered noise maps with the same gains, realization by realization
        centered_out = out - mean_only.as_array()
        centered_in = draws - mean_in.as_array()
        np.testing.assert_allclose(
            centered_out, centered_in * np.array([0.5, 1.5]), atol=1e-10
        )

    def test_cubic_term_does_not_break_batch_equality(self):
        medium = SusceptibilityProfile(chi1=1.0, chi2=0.3, chi3=0.05)
        draws = sample_state_array(GaussianState.vacuum(VAC), cfg(20))
        batch = propagate_ensemble(draws, 0.8, 0.0, medium, GRID)
        single = propagate_realization(
            QuadraturePair(draws[3, 0], draws[3, 1]), 0.8, 0.0, medium, GRID
        )
        assert batch[3, 0] == single.x1 and batch[3, 1] == single.x2


class TestVarianceScan:
    def test_identical_pairs_have_zero_variance(self):
        pairs = [QuadraturePair(1.0, 2.0)] * 10
        scan = variance_scan(pairs, default_thetas(19))
        assert np.all(scan.variances == 0.0)

    def test_hand_computed_two_point_ensemble(self):
        # X(0) = +-1 -> unbiased variance 2; X(90deg) = 0 always
        pairs = [QuadraturePair(1.0, 0.0), QuadraturePair(-1.0, 0.0)]
        scan = variance_scan(pairs, np.array([0.0, math.pi / 2]))
        assert scan.variances[0] == pytest.approx(2.0)
        assert scan.variances[1] == pytest.approx(0.0, abs=1e-30)
        assert scan.means[0] == pytest.approx(0.0)

    def test_rejects_tiny_ensembles(self):
        with pytest.raises(ValueError):
            variance_scan([QuadraturePair(1.0, 0.0)], default_thetas(5))

    def test_matches_direct_projection_estimator(self):
        rng = np.random.default_rng(3)
        pairs = rng.normal(size=(500, 2)) @ np.array([[1.0, 0.2], [0.0, 0.7]])
        thetas = default_thetas(37)
        scan = variance_scan(pairs, thetas)
        for j, theta in enumerate(thetas):
            x = pairs[:, 0] * math.cos(theta) + pairs[:, 1] * math.sin(theta)
            assert scan.variances[j] == pytest.approx(np.var(x, ddof=1), rel=1e-10)
            assert scan.means[j] == pytest.approx(np.mean(x), rel=1e-10, abs=1e-12)

    def test_scan_period_is_pi(self):
        state = GaussianState(QuadraturePair(0, 0), np.diag([0.25, 2.25]))
        thetas = np.linspace(0, 2 * math.pi, 73)
        scan = scan_state(state, thetas)
        np.testing.assert_allclose(scan.variances[:36], scan.variances[36:72], atol=1e-12)

    def test_scan_validation(self):
        with pytest.raises(ValueError):
            QuadratureScan(np.array([0.0, 1.0]), np.array([1.0]), np.array([0.0]))
        with pytest.raises(ValueError):
            QuadratureScan(np.array([0.0]), np.array([-1.0]), np.array([0.0]))


class TestSqueezingReport:
    def test_squeezed_state_report(self):
        state = GaussianState(QuadraturePair(0, 0), np.diag([0.25, 2.25]))
        report = squeezing_report(scan_state(state, default_thetas(181)), VAC)
        assert report.v_min == pytest.approx(0.25, rel=1e-12)
        assert report.v_max == pytest.approx(2.25, rel=1e-12)
        assert report.theta_min == pytest.approx(0.0)
        assert report.theta_max == pytest.approx(math.pi / 2)
        assert report.squeeze_db == pytest.approx(-6.020599913279624, abs=1e-9)
        assert report.antisqueeze_db == pytest.approx(3.5218251811136247, abs=1e-9)
        assert report.uncertainty_product == pytest.approx(0.5625, rel=1e-12)

    def test_orthogonality_of_extrema(self):
        state = GaussianState(QuadraturePair(0, 0), np.diag([0.7, 1.9]))
        report = squeezing_report(scan_state(state, default_thetas(181)), VAC)
        delta = abs(report.theta_max - report.theta_min) % math.pi
        assert delta == pytest.approx(math.pi / 2, abs=1e-12)

    def test_flat_vacuum_scan_is_zero_db(self):
        report = squeezing_report(
            scan_state(GaussianState.vacuum(VAC), default_thetas(181)), VAC
        )
        assert report.squeeze_db == pytest.approx(0.0, abs=1e-12)
        assert report.uncertainty_product == pytest.approx(1.0, rel=1e-12)

    def test_product_uses_orthogonal_grid_point(self):
        # rotated squeezed state: minimum away from zero
        cov = np.array([[1.3, -0.6], [-0.6, 1.3]])
        state = GaussianState(QuadraturePair(0, 0), cov)
        report = squeezing_report(scan_state(state, default_thetas(181)), VAC)
        eigvals = np.linalg.eigvalsh(cov)
        assert report.v_min == pytest.approx(eigvals[0], rel=1e-4)
        assert report.uncertainty_product == pytest.approx(
            eigvals[0] * eigvals[1], rel=1e-3
        )

    def test_rejects_bad_convention(self):
        scan = scan_state(GaussianState.vacuum(VAC), default_thetas(5))
        bad = object.__new__(VacuumConvention)
        object.__setattr__(bad, "var_zp", -1.0)
        with pytest.raises(ValueError):
            squeezing_report(scan, bad)
