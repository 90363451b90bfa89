import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from garchmcmc import (
    CsvFormatError,
    InvalidParams,
    ParamVector,
    PersistenceError,
    ReturnSeries,
    log_likelihood,
    log_posterior,
    make_log_posterior,
    read_series_csv,
    simulate,
    unconditional_variance,
    volatility_path,
    write_series_csv,
)

LOG_2PI = math.log(2.0 * math.pi)


def brute_force_loglik(params, y, sigma2_init):
    """Independent reference: explicit per-observation normal log densities
    driven by a hand-rolled variance recursion."""
    a, b, w, l = params.alpha, params.beta, params.omega, params.lam
    s2 = sigma2_init
    total = 0.0
    for t, yt in enumerate(y):
        if t > 0:
            yp = y[t - 1]
            s2 = w + (a + (l if yp < 0.0 else 0.0)) * yp * yp + b * s2
        total += -0.5 * math.log(2.0 * math.pi * s2) - yt * yt / (2.0 * s2)
    return total


class TestParamVector:
    def test_array_round_trip(self):
        p = ParamVector(0.1, 0.2, 0.3, 0.4)
        assert ParamVector.from_array(p.as_array()) == p

    def test_support_boundary_cases(self):
        assert ParamVector(0.0, 0.0, 0.1, 0.0).in_support()
        assert ParamVector(0.1, 0.2, 0.3, -0.1).in_support()  # alpha+lam = 0
        assert not ParamVector(0.1, 0.2, 0.0, 0.1).in_support()  # omega = 0
        assert not ParamVector(-0.01, 0.2, 0.3, 0.1).in_support()
        assert not ParamVector(0.1, -0.2, 0.3, 0.1).in_support()
        assert not ParamVector(0.1, 0.2, 0.3, -0.2).in_support()  # alpha+lam < 0

    def test_persistence(self):
        assert ParamVector(0.03, 0.85, 0.05, 0.1).persistence == pytest.approx(0.93)


class TestUnconditionalVariance:
    def test_benchmark_parameter_point(self):
        v = unconditional_variance(ParamVector(0.03, 0.85, 0.05, 0.1))
        assert v == pytest.approx(0.05 / (1.0 - 0.93), rel=1e-12)

    def test_constant_volatility_case(self):
        assert unconditional_variance(ParamVector(0.0, 0.0, 1.0, 0.0)) == 1.0

    def test_explosive_persistence_rejected(self):
        with pytest.raises(PersistenceError):
            unconditional_variance(ParamVector(0.5, 0.5, 0.1, 0.2))

    def test_unit_persistence_rejected(self):
        with pytest.raises(PersistenceError):
            unconditional_variance(ParamVector(0.1, 0.8, 0.1, 0.2))


class TestVolatilityPath:
    def test_three_step_hand_recursion(self):
        p = ParamVector(alpha=0.1, beta=0.5, omega=0.2, lam=0.3)
        path = volatility_path(p, np.array([1.0, -1.0, 2.0]), sigma2_init=1.0)
        # second step has a positive predecessor, third a negative one
        assert_allclose(path.sigma2, [1.0, 0.8, 1.0], rtol=1e-15)
        assert path.sigma2_init == 1.0

    def test_no_leverage_matches_symmetric_recursion(self, rng):
        y = rng.standard_normal(200)
        p = ParamVector(0.08, 0.6, 0.3, 0.0)
        path = volatility_path(p, y, sigma2_init=0.7)
        s2 = 0.7
        expected = [s2]
        for t in range(1, len(y)):
            s2 = 0.3 + 0.08 * y[t - 1] ** 2 + 0.6 * s2
            expected.append(s2)
        assert_allclose(path.sigma2, expected, rtol=1e-12)

    def test_positive_series_ignores_leverage(self, rng):
        y = np.abs(rng.standard_normal(100)) + 0.01
        base = volatility_path(ParamVector(0.1, 0.5, 0.2, 0.0), y, 1.0)
        lever = volatility_path(ParamVector(0.1, 0.5, 0.2, 0.25), y, 1.0)
        assert_array_equal(base.sigma2, lever.sigma2)

    def test_sign_flip_never_shrinks_variance(self, rng):
        y = rng.standard_normal(150)
        p = ParamVector(0.05, 0.6, 0.1, 0.2)
        flipped = volatility_path(p, -np.abs(y), 1.0)
        original = volatility_path(p, np.abs(y), 1.0)
        assert np.all(flipped.sigma2 >= original.sigma2 - 1e-15)

    def test_path_positive_for_random_support_points(self, rng):
        y = rng.standard_normal(300) * 3.0
        for _ in range(20):
            p = ParamVector(rng.uniform(0, 0.5), rng.uniform(0, 0.9),
                            rng.uniform(0.01, 2.0), rng.uniform(0, 0.5))
            path = volatility_path(p, y, sigma2_init=rng.uniform(0.1, 5.0))
            assert np.all(path.sigma2 > 0)
            assert np.all(np.isfinite(path.sigma2))


class TestSimulate:
    def test_deterministic_in_seed(self):
        a = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 500, seed=9)
        b = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 500, seed=9)
        assert_array_equal(a.y, b.y)
        assert_array_equal(a.sigma2_true, b.sigma2_true)

    def test_seed_changes_series(self):
        a = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 500, seed=9)
        b = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 500, seed=10)
        assert not np.array_equal(a.y, b.y)

    def test_iid_limit_variance(self):
        s = simulate(ParamVector(0.0, 0.0, 1.0, 0.0), 100_000, seed=4)
        assert s.y.var() == pytest.approx(1.0, rel=0.02)
        assert_array_equal(s.sigma2_true, np.ones(100_000))

    def test_sample_variance_tracks_unconditional(self):
        s = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 2000, seed=23)
        uncond = unconditional_variance(ParamVector(0.03, 0.85, 0.05, 0.1))
        assert 0.5 * uncond < s.y.var() < 2.0 * uncond

    def test_explosive_persistence_rejected(self):
        with pytest.raises(PersistenceError):
            simulate(ParamVector(0.5, 0.6, 0.1, 0.0), 100, seed=1)

    def test_fixed_seed_value_allows_nonstationary_params(self):
        s = simulate(ParamVector(0.5, 0.6, 0.1, 0.0), 50, seed=1, sigma2_init=1.0)
        assert np.all(np.isfinite(s.y))


class TestLogLikelihood:
    def test_three_observation_value(self):
        p = ParamVector(alpha=0.1, beta=0.5, omega=0.2, lam=0.3)
        ll = log_likelihood(p, np.array([1.0, -1.0, 2.0]), sigma2_init=1.0)
        assert ll == pytest.approx(-5.770243823956913, rel=1e-14)

    def test_single_zero_observation(self):
        ll = log_likelihood(ParamVector(0.1, 0.5, 0.2, 0.3), np.array([0.0]),
                            sigma2_init=1.0)
        assert ll == pytest.approx(-0.5 * LOG_2PI, rel=1e-14)

    def test_matches_brute_force_on_short_series(self, rng):
        for _ in range(25):
            n = rng.integers(1, 6)
            y = rng.standard_normal(n) * 2.0
            p = ParamVector(rng.uniform(0, 0.4), rng.uniform(0, 0.8),
                            rng.uniform(0.05, 1.0), rng.uniform(0, 0.4))
            s0 = rng.uniform(0.2, 3.0)
            ll = log_likelihood(p, y, sigma2_init=s0)
            ref = brute_force_loglik(p, y, s0)
            assert ll == pytest.approx(ref, rel=1e-12)

    def test_invalid_params_raise(self):
        with pytest.raises(InvalidParams):
            log_likelihood(ParamVector(0.1, 0.5, -0.2, 0.3), np.array([1.0]))

    def test_finite_on_long_series(self):
        s = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 2000, seed=23)
        ll = log_likelihood(ParamVector(0.03, 0.85, 0.05, 0.1), s.y)
        assert np.isfinite(ll)


class TestLogPosterior:
    def test_equals_likelihood_inside_support(self):
        y = np.array([0.4, -1.2, 0.3, 2.0])
        p = ParamVector(0.1, 0.6, 0.3, 0.05)
        assert log_posterior(p, y, sigma2_init=1.0) == log_likelihood(
            p, y, sigma2_init=1.0)

    def test_outside_support_is_minus_inf(self):
        y = np.array([0.4, -1.2])
        assert log_posterior(ParamVector(0.1, 0.6, -0.1, 0.05), y) == -math.inf
        assert log_posterior(ParamVector(-0.1, 0.6, 0.3, 0.05), y) == -math.inf

    def test_boundary_alpha_zero_is_finite(self):
        y = np.array([0.4, -1.2, 0.3])
        assert math.isfinite(log_posterior(ParamVector(0.0, 0.6, 0.3, 0.05), y))

    def test_nonstationary_rejected_under_default_seeding(self):
        y = np.array([0.4, -1.2, 0.3])
        assert log_posterior(ParamVector(0.3, 0.8, 0.3, 0.05), y) == -math.inf

    def test_nonstationary_allowed_with_fixed_seeding(self):
        y = np.array([0.4, -1.2, 0.3])
        lp = log_posterior(ParamVector(0.3, 0.8, 0.3, 0.05), y, sigma2_init=1.0)
        assert math.isfinite(lp)

    def test_closure_matches_direct_evaluation(self, rng):
        y = rng.standard_normal(50)
        f = make_log_posterior(y)
        for _ in range(10):
            arr = np.array([rng.uniform(-0.1, 0.3), rng.uniform(0, 1.0),
                            rng.uniform(-0.1, 0.5), rng.uniform(-0.2, 0.3)])
            assert f(arr) == log_posterior(ParamVector.from_array(arr), y)


class TestReturnSeries:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ReturnSeries(y=np.array([1.0, np.nan]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ReturnSeries(y=np.array([]))

    def test_rejects_mismatched_sigma2(self):
        with pytest.raises(ValueError):
            ReturnSeries(y=np.array([1.0, 2.0]), sigma2_true=np.array([1.0]))

    def test_rejects_nonpositive_sigma2(self):
        with pytest.raises(ValueError):
            ReturnSeries(y=np.array([1.0, 2.0]), sigma2_true=np.array([1.0, 0.0]))


class TestSeriesCsv:
    def test_round_trip_with_sigma2(self, tmp_path):
        s = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 64, seed=5)
        path = tmp_path / "series.csv"
        write_series_csv(s, path)
        text = path.read_text()
        assert text.splitlines()[0] == "y,sigma2_true"
        back = read_series_csv(path)
        assert_array_equal(back.y, s.y)
        assert_array_equal(back.sigma2_true, s.sigma2_true)

    def test_round_trip_without_sigma2(self, tmp_path):
        s = ReturnSeries(y=np.array([0.1, -2.5e-17, 3.0]))
        path = tmp_path / "series.csv"
        write_series_csv(s, path)
        assert path.read_text().splitlines()[0] == "y"
        back = read_series_csv(path)
        assert_array_equal(back.y, s.y)
        assert back.sigma2_true is None

    def test_bad_header_names_line_one(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("returns\n0.1\n")
        with pytest.raises(CsvFormatError, match="line 1"):
            read_series_csv(path)

    def test_non_numeric_row_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("y\n0.1\nnot-a-number\n")
        with pytest.raises(CsvFormatError, match="line 3"):
            read_series_csv(path)

    def test_wrong_column_count_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("y,sigma2_true\n0.1,1.0\n0.2\n")
        with pytest.raises(CsvFormatError, match="line 3"):
            read_series_csv(path)

    def test_empty_body_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("y\n")
        with pytest.raises(CsvFormatError):
            read_series_csv(path)
