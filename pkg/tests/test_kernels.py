"""Backend-level checks: both kernel implementations against SciPy oracles
and against each other."""

import numpy as np
import pytest
from scipy import special, stats

from picpkit import kernels


def test_betainc_boundaries(backend):
    assert backend.betainc_reg(0.0, 2.0, 3.0) == 0.0
    assert backend.betainc_reg(1.0, 2.0, 3.0) == 1.0
    assert backend.betainc_reg(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-14)


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (1.05, 0.5), (2.5, 0.5), (50.0, 0.5), (1.0, 7.0), (4000.0, 0.5)])
def test_betainc_against_scipy(backend, a, b):
    # scipy itself drifts ~1e-12 within 1e-9 of the endpoints (checked
    # against mpmath), so compare on the interior and bound at 1e-12
    x = np.linspace(1e-6, 1.0 - 1e-6, 201)
    ours = backend.betainc_reg_arr(x, np.full_like(x, a), np.full_like(x, b))
    ref = special.betainc(a, b, x)
    assert np.max(np.abs(ours - ref)) < 1e-12


def test_betainc_against_mpmath_near_boundaries(backend):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    for a, b in [(0.5, 0.5), (3.5, 0.5), (20.0, 0.5)]:
        for x in (1e-12, 1e-9, 1e-3, 0.999, 1.0 - 1e-9, 1.0 - 1e-12):
            exact = float(
                mpmath.betainc(mpmath.mpf(a), mpmath.mpf(b), 0, mpmath.mpf(x), regularized=True)
            )
            assert backend.betainc_reg(x, a, b) == pytest.approx(exact, abs=1e-12)


def test_betainc_symmetry(backend):
    for x in (0.1, 0.37, 0.62, 0.93):
        lhs = backend.betainc_reg(x, 3.2, 0.5)
        rhs = 1.0 - backend.betainc_reg(1.0 - x, 0.5, 3.2)
        assert lhs == pytest.approx(rhs, abs=1e-13)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.1, 3.3, 6.7, 42.0, 100.0, 1e4, 1e7, 1e12])
def test_t_cdf_against_scipy(backend, nu):
    x = np.array([-30.0, -4.0, -1.5, -0.2, 0.0, 0.4, 1.0, 1.96, 2.83, 7.5, 50.0])
    ours = backend.t_cdf_arr(x, np.full_like(x, nu))
    ref = stats.t.cdf(x, nu)
    assert np.max(np.abs(ours - ref)) < 1e-12
    assert np.all(np.diff(ours) > 0)  # strictly increasing on these points


def test_t_cdf_symmetry(backend):
    for nu in (2.5, 5.0, 11.0):
        for x in (0.1, 1.0, 3.7, 9.0):
            assert backend.t_cdf(-x, nu) == pytest.approx(
                1.0 - backend.t_cdf(x, nu), abs=1e-15
            )


def test_t_quantile_round_trip(backend):
    ps = np.array([1e-6, 0.01, 0.2, 0.5, 0.8, 0.975, 0.9999])
    for nu in (2.05, 3.3, 8.0, 200.0):
        q = backend.t_quantile_arr(ps, np.full_like(ps, nu))
        back = backend.t_cdf_arr(q, np.full_like(ps, nu))
        assert np.max(np.abs(back - ps)) < 1e-10


def test_t_quantile_cauchy_closed_form(backend):
    # quantile of t(1) is tan(pi*(p - 1/2))
    assert backend.t_quantile(0.75, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert backend.t_quantile(0.25, 1.0) == pytest.approx(-1.0, abs=1e-10)


def test_t_quantile_against_bisection_oracle(backend):
    # independent bracketed bisection on the scipy CDF, tolerance 1e-14
    p, nu = 0.975, 100.0
    lo, hi = 0.0, 64.0
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if stats.t.cdf(mid, nu) < p:
            lo = mid
        else:
            hi = mid
    oracle = 0.5 * (lo + hi)
    assert backend.t_quantile(p, nu) == pytest.approx(oracle, abs=1e-6)


def test_ks_kernel_matches_naive(backend):
    rng = np.random.default_rng(7)
    z2 = np.sort(rng.standard_t(6, 500) ** 2 * 0.6)
    nu, scale = 6.0, 0.65
    got = backend.ks_scaled_f(z2, nu, scale)
    f = 2.0 * stats.t.cdf(np.sqrt(z2 / scale), nu) - 1.0
    i = np.arange(1, z2.size + 1)
    naive = np.maximum(i / z2.size - f, f - (i - 1) / z2.size).max()
    assert got == pytest.approx(naive, abs=1e-12)


def test_backends_agree():
    from picpkit import _kernels_py

    try:
        from picpkit import _ckernels
    except ImportError:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(11)
    x = rng.standard_t(4, 300)
    nu = np.full_like(x, 4.0)
    assert np.allclose(
        _kernels_py.t_cdf_arr(x, nu), _ckernels.t_cdf_arr(x, nu), atol=1e-13
    )
    p = rng.uniform(0.001, 0.999, 100)
    nus = rng.uniform(2.1, 60.0, 100)
    assert np.allclose(
        _kernels_py.t_quantile_arr(p, nus),
        _ckernels.t_quantile_arr(p, nus),
        atol=1e-10,
    )


def test_dispatch_layer_broadcasts():
    out = kernels.t_cdf_arr(np.array([[0.0, 1.0], [2.0, -1.0]]), 5.0)
    assert out.shape == (2, 2)
    assert out[0, 0] == pytest.approx(0.5)
    assert kernels.backend_name() in ("c", "python")
