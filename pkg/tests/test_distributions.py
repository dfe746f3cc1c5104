import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from picpkit import distributions as d


class TestStudentT:
    def test_cdf_symmetry_at_zero(self):
        assert d.t_cdf(0.0, 5.0) == 0.5

    def test_cauchy_closed_form(self):
        # t(1) CDF is 1/2 + arctan(x)/pi
        assert d.t_cdf(1.0, 1.0) == pytest.approx(0.75, abs=1e-14)

    def test_cdf_approaches_one(self):
        vals = [d.t_cdf(x, 10.0) for x in (2.0, 5.0, 20.0, 100.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 1 - 1e-8

    def test_quantile_median(self):
        assert d.t_quantile(0.5, 7.7) == 0.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            d.t_cdf(1.0, -3.0)
        with pytest.raises(ValueError):
            d.t_quantile(0.0, 5.0)
        with pytest.raises(ValueError):
            d.t_quantile(1.0, 5.0)
        with pytest.raises(ValueError):
            d.reg_inc_beta(1.5, 1.0, 1.0)
        with pytest.raises(ValueError):
            d.reg_inc_beta(0.5, -1.0, 1.0)


class TestScaledT:
    def test_cdf_at_zero(self):
        assert d.ts_cdf(0.0, 4.5) == 0.5

    def test_requires_nu_above_two(self):
        with pytest.raises(ValueError):
            d.ts_cdf(1.0, 2.0)
        with pytest.raises(ValueError):
            d.ts_quantile(0.9, 1.5)

    @given(
        p=st.floats(1e-9, 1.0 - 1e-9),
        nu=st.floats(2.05, 500.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_cdf_quantile_round_trip_in_probability(self, p, nu):
        # the binding tolerance is in probability space: deep in the tails
        # the density vanishes, so x-space agreement is meaningless there
        assert d.ts_cdf(d.ts_quantile(p, nu), nu) == pytest.approx(p, abs=1e-9)

    @given(
        x=st.floats(-4.0, 4.0),
        nu=st.floats(2.05, 500.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_quantile_cdf_round_trip(self, x, nu):
        p = d.ts_cdf(x, nu)
        assert d.ts_quantile(p, nu) == pytest.approx(x, abs=1e-9)

    def test_large_nu_matches_normal(self):
        assert d.ts_quantile(0.975, 100.0) == pytest.approx(1.96, abs=0.01)

    def test_against_scipy(self):
        for nu in (2.5, 6.0, 33.0):
            s = np.sqrt((nu - 2.0) / nu)
            assert d.ts_cdf(1.3, nu) == pytest.approx(stats.t.cdf(1.3 / s, nu), abs=1e-12)


class TestScaledF:
    def test_cdf_support_boundary(self):
        p = d.ScaledF(nu=5.0)
        assert d.fs_cdf(0.0, p) == 0.0
        with pytest.raises(ValueError):
            d.fs_cdf(-0.1, p)

    @given(x=st.floats(0.0, 50.0), nu=st.floats(0.5, 200.0))
    @settings(max_examples=60, deadline=None)
    def test_squaring_identity(self, x, nu):
        # P(Z^2 <= x^2) = 2 T(x) - 1 for Z ~ t(nu), scale 1
        lhs = d.fs_cdf(x * x, d.ScaledF(nu=nu, scale=1.0))
        rhs = 2.0 * d.t_cdf(x, nu) - 1.0
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_cdf_monotone_with_limits(self):
        p = d.ScaledF(nu=7.0, scale=0.4)
        xs = np.linspace(0.0, 200.0, 400)
        c = d.fs_cdf(xs, p)
        assert np.all(np.diff(c) >= 0)
        assert c[0] == 0.0
        assert c[-1] > 1 - 1e-6

    @pytest.mark.parametrize("nu", [3.0, 5.0, 10.0, 50.0])
    def test_pdf_integrates_to_one(self, nu):
        p = d.ScaledF(nu=nu, scale=1.0)
        total, err = integrate.quad(
            lambda x: d.fs_pdf(x, p), 0.0, np.inf, limit=300
        )
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_unit_mean_scale(self):
        p = d.ScaledF.unit_mean(6.0)
        assert p.scale == pytest.approx(4.0 / 6.0)
        mean, err = integrate.quad(
            lambda x: x * d.fs_pdf(x, p), 0.0, np.inf, limit=400
        )
        assert mean == pytest.approx(1.0, abs=1e-6)
        assert p.mean() == pytest.approx(1.0)

    def test_against_scipy_f(self):
        p = d.ScaledF(nu=9.0, scale=2.5)
        xs = np.array([0.1, 0.7, 2.0, 8.0])
        ref = stats.f.cdf(xs / p.scale, 1, p.nu)
        assert np.allclose(d.fs_cdf(xs, p), ref, atol=1e-12)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            d.ScaledF(nu=-1.0)
        with pytest.raises(ValueError):
            d.ScaledF(nu=3.0, scale=0.0)
        with pytest.raises(ValueError):
            d.ScaledF.unit_mean(2.0)


class TestSampling:
    def test_deterministic(self):
        a = d.sample_ts(8.0, 1000, seed=123)
        b = d.sample_ts(8.0, 1000, seed=123)
        assert np.array_equal(a, b)
        c = d.sample_ts(8.0, 1000, seed=124)
        assert not np.array_equal(a, c)

    def test_unit_variance(self):
        z = d.sample_ts(20.0, 1_000_000, seed=5)
        assert z.var() == pytest.approx(1.0, abs=0.01)

    def test_empirical_cdf_close_to_model(self):
        nu, m = 8.0, 100_000
        z = np.sort(d.sample_ts(nu, m, seed=9))
        model = np.asarray(d.ts_cdf(z, nu))
        i = np.arange(1, m + 1)
        dist = np.maximum(i / m - model, model - (i - 1) / m).max()
        critical_1pct = np.sqrt(-0.5 * np.log(0.005) / m)
        assert dist < critical_1pct

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            d.sample_ts(2.0, 10, seed=0)
        with pytest.raises(ValueError):
            d.sample_ts(5.0, 0, seed=0)
