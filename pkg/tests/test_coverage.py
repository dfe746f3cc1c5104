import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from picpkit import coverage as cov
from picpkit.distributions import sample_ts
from picpkit.metrics import Verdict


class TestKFactor:
    def test_value_at_3_3(self):
        assert cov.k_factor(0.95, 3.3) == pytest.approx(1.90, abs=0.005)

    def test_curve_maximum_region(self):
        assert cov.k_factor(0.95, 6.7) == pytest.approx(2.0, abs=0.01)

    def test_normal_limit(self):
        assert cov.k_factor(0.95, 1e6) == pytest.approx(1.96, abs=1e-3)

    def test_against_scipy(self):
        for nu in (2.5, 3.3, 6.7, 40.0):
            ref = stats.t.ppf(0.975, nu) * np.sqrt((nu - 2) / nu)
            assert cov.k_factor(0.95, nu) == pytest.approx(ref, abs=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            cov.k_factor(1.0, 5.0)
        with pytest.raises(ValueError):
            cov.k_factor(0.95, 2.0)


class TestCoverageOfInterval:
    def test_round_trip(self):
        for p in (0.67, 0.95, 0.995):
            for nu in (3.0, 5.0, 10.0, 100.0):
                k = cov.k_factor(p, nu)
                assert cov.coverage_of_interval(k, nu) == pytest.approx(p, abs=1e-9)

    def test_deviation_small_above_threshold(self):
        for nu in (3.6, 5.0, 10.0, 50.0):
            assert abs(cov.coverage_of_interval(1.96, nu) - 0.95) <= 0.005

    def test_deviation_large_at_low_nu(self):
        assert abs(cov.coverage_of_interval(1.96, 2.2) - 0.95) > 0.005

    def test_positive_halfwidth_required(self):
        with pytest.raises(ValueError):
            cov.coverage_of_interval(0.0, 5.0)


class TestPicp:
    def test_direct_count(self):
        hits, frac = cov.picp([0.0, 0.0, 0.0, 3.0], 1.96)
        assert (hits, frac) == (3, 0.75)

    def test_all_inside(self):
        hits, frac = cov.picp(np.zeros(10), 0.5)
        assert (hits, frac) == (10, 1.0)

    def test_boundary_counts_as_hit(self):
        hits, frac = cov.picp([1.96], 1.96)
        assert (hits, frac) == (1, 1.0)

    def test_matches_z_score_path(self):
        rng = np.random.default_rng(0)
        E = rng.standard_normal(500)
        uE = np.abs(rng.standard_normal(500)) + 0.2
        z = E / uE
        assert cov.picp(z, 1.96) == cov.picp(E / uE, 1.96)

    @given(
        k1=st.floats(0.1, 3.0),
        dk=st.floats(0.0, 3.0),
        seed=st.integers(0, 1000),
    )
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_k(self, k1, dk, seed):
        z = np.random.default_rng(seed).standard_normal(200)
        _, p1 = cov.picp(z, k1)
        _, p2 = cov.picp(z, k1 + dk + 1e-9)
        assert p2 >= p1
        assert cov.picp(z, 1e9)[1] == 1.0


class TestWilson:
    def test_boundary_rules(self):
        lo, hi = cov.wilson_ci(0, 50)
        assert lo == 0.0
        lo, hi = cov.wilson_ci(50, 50)
        assert hi == 1.0

    def test_contains_point_estimate(self):
        for hits, m in [(1, 10), (5, 10), (950, 1000), (37, 200)]:
            lo, hi = cov.wilson_ci(hits, m)
            assert lo <= hits / m <= hi

    def test_reference_case(self):
        lo, hi = cov.wilson_ci(950, 1000, level=0.95)
        assert lo < 0.95 < hi
        assert hi - lo < 0.032

    def test_against_clopper_pearson(self):
        # continuity-corrected Wilson tracks the exact binomial interval
        # closely at moderate n (the oracle cross-check)
        for hits, m in [(950, 1000), (670, 1000), (190, 200)]:
            lo, hi = cov.wilson_ci(hits, m)
            cp_lo = stats.beta.ppf(0.025, hits, m - hits + 1)
            cp_hi = stats.beta.ppf(0.975, hits + 1, m - hits)
            assert lo == pytest.approx(cp_lo, abs=0.005)
            assert hi == pytest.approx(cp_hi, abs=0.005)

    def test_width_shrinks_with_n(self):
        lo1, hi1 = cov.wilson_ci(8, 10)
        lo2, hi2 = cov.wilson_ci(80, 100)
        assert hi2 - lo2 < hi1 - lo1

    def test_validation(self):
        with pytest.raises(ValueError):
            cov.wilson_ci(5, 4)
        with pytest.raises(ValueError):
            cov.wilson_ci(1, 10, level=0.0)


class TestValidatePicp95:
    def test_calibrated_normal_valid(self):
        z = np.random.default_rng(21).standard_normal(10_000)
        res = cov.validate_picp95(z)
        assert res.verdict == Verdict.VALID
        assert res.k == 1.96
        assert res.picp == res.hits / res.m

    def test_heavy_tail_untestable(self):
        z = sample_ts(2.2, 10_000, seed=22)
        res = cov.validate_picp95(z)
        assert res.verdict == Verdict.UNTESTABLE
        assert res.beta_gm_z2 >= cov.PICP_SKEW_GATE

    def test_overdispersed_invalid(self):
        z = 2.0 * np.random.default_rng(23).standard_normal(10_000)
        res = cov.validate_picp95(z)
        assert res.verdict == Verdict.INVALID
        # coverage of +/-1.96 for doubled scale is 2*Phi(0.98) - 1
        assert res.picp == pytest.approx(2 * stats.norm.cdf(0.98) - 1, abs=0.02)

    def test_not_diagnostic(self):
        z = np.random.default_rng(2).standard_normal(100)
        assert cov.validate_picp95(z).diagnostic is False


class TestPicpDiagnostic:
    def test_normal_one_sigma(self):
        z = np.random.default_rng(31).standard_normal(100_000)
        res = cov.picp_diagnostic(z, 0.6827, 1.0)
        assert res.picp == pytest.approx(0.683, abs=0.005)
        assert res.diagnostic is True

    def test_all_zero_invalid_vs_any_target(self):
        # at this size the Wilson lower bound is ~0.99995, so the interval
        # clears any band with target below ~0.9949
        for target in (0.5, 0.9, 0.95, 0.99):
            res = cov.picp_diagnostic(np.zeros(100_000), target, 1.0)
            assert res.picp == 1.0
            assert res.verdict == Verdict.INVALID

    def test_three_sigma_less_stable_than_two(self):
        z = sample_ts(5.0, 100_000, seed=32)
        res3 = cov.picp_diagnostic(z, 0.995, 2.83)
        res2 = cov.validate_picp95(z)
        dev3 = abs(res3.picp - 0.995)
        dev2 = abs(res2.picp - 0.95)
        assert dev3 > dev2


class TestBinning:
    def test_exact_division(self):
        groups = cov.bin_by_uncertainty(np.arange(100.0), 20)
        assert len(groups) == 20
        assert all(len(g) == 5 for g in groups)

    def test_remainder_goes_to_low_bins(self):
        groups = cov.bin_by_uncertainty(np.arange(103.0), 20)
        sizes = [len(g) for g in groups]
        assert sizes == [6, 6, 6] + [5] * 17

    def test_ties_preserve_order(self):
        groups = cov.bin_by_uncertainty(np.ones(10), 2)
        assert np.array_equal(np.concatenate(groups), np.arange(10))

    def test_partition_exact(self):
        rng = np.random.default_rng(4)
        u = rng.uniform(0.1, 5.0, 137)
        groups = cov.bin_by_uncertainty(u, 20)
        joined = np.sort(np.concatenate(groups))
        assert np.array_equal(joined, np.arange(137))
        # ordered by nondecreasing uncertainty across bins
        maxes = [u[g].max() for g in groups]
        mins = [u[g].min() for g in groups]
        assert all(maxes[i] <= mins[i + 1] for i in range(19))

    def test_too_many_bins(self):
        with pytest.raises(ValueError):
            cov.bin_by_uncertainty([1.0, 2.0], 3)


class TestLcp:
    def _calibrated(self, m, seed=50):
        rng = np.random.default_rng(seed)
        uE = np.exp(rng.normal(0.0, 0.4, m))
        E = rng.standard_normal(m) * uE
        return E, uE

    def test_calibrated_mostly_valid(self):
        E, uE = self._calibrated(10_000)
        res = cov.lcp_analysis(E, uE, n_bins=20)
        n_valid = sum(1 for b in res.bins if b.coverage.verdict == Verdict.VALID)
        assert n_valid >= 18

    def test_miscalibrated_region_detected(self):
        E, uE = self._calibrated(10_000, seed=51)
        u_sorted = np.sort(uE)
        cut = u_sorted[5000]
        uE_bad = np.where(uE >= cut, 2.0 * uE, uE)  # overestimated on top half
        res = cov.lcp_analysis(E, uE_bad, n_bins=20)
        high_bins = res.bins[10:]
        invalid_high = [
            b for b in high_bins if b.coverage.verdict == Verdict.INVALID
        ]
        assert len(invalid_high) >= 8
        assert all(b.coverage.picp > 0.955 for b in invalid_high)

    def test_single_bin_equals_overall(self):
        E, uE = self._calibrated(500)
        res = cov.lcp_analysis(E, uE, n_bins=1)
        assert len(res.bins) == 1
        assert res.bins[0].coverage == res.overall

    def test_hits_sum_to_overall(self):
        E, uE = self._calibrated(1037)
        res = cov.lcp_analysis(E, uE, n_bins=20)
        assert sum(b.coverage.hits for b in res.bins) == res.overall.hits

    def test_bin_edges_cover_data(self):
        E, uE = self._calibrated(400)
        res = cov.lcp_analysis(E, uE, n_bins=8)
        assert res.bins[0].uE_low == uE.min()
        assert res.bins[-1].uE_high == uE.max()
