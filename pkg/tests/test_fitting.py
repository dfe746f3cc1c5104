import numpy as np
import pytest
from scipy import stats

from picpkit import fitting
from picpkit.distributions import ScaledF, fs_cdf, sample_ts


class TestKsDistance:
    def test_mid_quantile_construction(self):
        # points at quantiles (i - 0.5)/n give exactly 0.5/n
        n = 40
        q = (np.arange(1, n + 1) - 0.5) / n
        sample = stats.norm.ppf(q)
        d = fitting.ks_distance(sample, lambda x: stats.norm.cdf(x))
        assert d == pytest.approx(0.5 / n, abs=1e-12)

    def test_single_point_at_median(self):
        d = fitting.ks_distance([0.0], lambda x: stats.norm.cdf(x))
        assert d == pytest.approx(0.5)

    def test_large_sample_below_critical(self):
        n = 100_000
        sample = np.random.default_rng(3).standard_normal(n)
        d = fitting.ks_distance(sample, lambda x: stats.norm.cdf(x))
        assert d < fitting.ks_critical_value(n, alpha=0.01)

    def test_agrees_with_scipy_kstest(self):
        sample = np.random.default_rng(4).standard_normal(500)
        d = fitting.ks_distance(sample, lambda x: stats.norm.cdf(x))
        ref = stats.kstest(sample, "norm").statistic
        assert d == pytest.approx(ref, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fitting.ks_distance([], lambda x: x)


class TestNelderMead:
    def test_quadratic_1d(self):
        x, f, ok = fitting.nelder_mead(lambda v: (v[0] - 2.0) ** 2, [0.0])
        assert ok
        assert x[0] == pytest.approx(2.0, abs=1e-6)

    def test_quadratic_2d(self):
        x, f, ok = fitting.nelder_mead(
            lambda v: (v[0] - 1.0) ** 2 + (v[1] + 3.0) ** 2, [0.0, 0.0]
        )
        assert ok
        assert x[0] == pytest.approx(1.0, abs=1e-5)
        assert x[1] == pytest.approx(-3.0, abs=1e-5)

    def test_rosenbrock(self):
        def rosen(v):
            return (1 - v[0]) ** 2 + 100 * (v[1] - v[0] ** 2) ** 2

        x, f, ok = fitting.nelder_mead(rosen, [-1.2, 1.0], max_iter=5000)
        assert x[0] == pytest.approx(1.0, abs=1e-3)
        assert x[1] == pytest.approx(1.0, abs=1e-3)

    def test_unbounded_descent_reports_no_convergence(self):
        x, f, ok = fitting.nelder_mead(lambda v: -v[0], [0.0], max_iter=200)
        assert not ok

    def test_rejects_non_finite_start(self):
        with pytest.raises(ValueError):
            fitting.nelder_mead(lambda v: float("nan"), [0.0])

    def test_deterministic(self):
        obj = lambda v: (v[0] - 0.5) ** 4 + abs(v[1])
        a = fitting.nelder_mead(obj, [3.0, 3.0])
        b = fitting.nelder_mead(obj, [3.0, 3.0])
        assert np.array_equal(a[0], b[0]) and a[1] == b[1]


class TestFitScaledF:
    def test_recovers_heavy_tail_nu(self):
        z = sample_ts(3.0, 4000, seed=100)
        fit = fitting.fit_scaled_f(z * z)
        assert 2.2 <= fit.nu <= 4.5
        assert fit.ks < fitting.ks_critical_value(4000, alpha=0.01)

    def test_quasi_normal_gives_large_nu(self):
        z = np.random.default_rng(101).standard_normal(10_000)
        fit = fitting.fit_scaled_f(z * z)
        assert fit.nu >= 50.0

    def test_ks_consistency_invariant(self):
        z = sample_ts(6.0, 1000, seed=102)
        fit = fitting.fit_scaled_f(z * z)
        recomputed = fitting.ks_distance(
            z * z, lambda v: fs_cdf(v, ScaledF(nu=fit.nu, scale=fit.scale))
        )
        assert abs(fit.ks - recomputed) < 1e-12

    def test_scale_equivariance(self):
        z2 = sample_ts(8.0, 2000, seed=103) ** 2
        base = fitting.fit_scaled_f(z2)
        scaled = fitting.fit_scaled_f(3.0 * z2)
        assert scaled.scale == pytest.approx(3.0 * base.scale, rel=0.05)
        assert scaled.nu == pytest.approx(base.nu, rel=0.25)

    def test_fitted_cdf_monotone(self):
        z2 = sample_ts(4.0, 500, seed=104) ** 2
        fit = fitting.fit_scaled_f(z2)
        c = fs_cdf(np.sort(z2), ScaledF(nu=fit.nu, scale=fit.scale))
        assert np.all(np.diff(c) >= 0)
        assert c[0] >= 0.0 and c[-1] <= 1.0

    def test_unit_mean_mode(self):
        z2 = sample_ts(7.0, 2000, seed=105) ** 2
        fit = fitting.fit_scaled_f(z2, unit_mean=True)
        assert fit.unit_mean
        assert fit.scale == pytest.approx((fit.nu - 2.0) / fit.nu, rel=1e-12)
        assert ScaledF(nu=fit.nu, scale=fit.scale).mean() == pytest.approx(1.0)

    def test_small_sample_flagged(self):
        z2 = sample_ts(5.0, 30, seed=106) ** 2
        fit = fitting.fit_scaled_f(z2)
        assert fit.small_sample

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            fitting.fit_scaled_f(np.zeros(100))
        with pytest.raises(ValueError):
            fitting.fit_scaled_f([1.0])
        with pytest.raises(ValueError):
            fitting.fit_scaled_f([-1.0, 2.0])

    def test_deterministic(self):
        z2 = sample_ts(5.0, 800, seed=107) ** 2
        a = fitting.fit_scaled_f(z2)
        b = fitting.fit_scaled_f(z2)
        assert a == b
