"""NumPy fallback for the compiled kernels in ``picpkit._ckernels``.

Implements the same call surface: regularized incomplete beta, Student-t
CDF / quantile (scalar and 1-d array forms), and the Kolmogorov-Smirnov
objective against a scaled F(1, nu).  Array variants run Lentz's continued
fraction on whole arrays at once so the fallback stays usable on large
samples; callers are expected to pass contiguous float64 arrays of equal
length (the dispatch layer in ``picpkit.kernels`` takes care of that).

Accuracy target is 1e-12 absolute on the incomplete beta, matching the
compiled backend.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = 3e-16  # continued-fraction convergence (relative)
_FPMIN = 1e-300
_MAXIT = 500
_QUANTILE_TOL = 1e-13  # |cdf(x) - p| target for quantile inversion
_NU_ASYM = 1e4  # above this the 1/nu expansion beats the CF in accuracy

_lgamma = np.frompyfunc(math.lgamma, 1, 1)
_erfc = np.frompyfunc(math.erfc, 1, 1)
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _lbeta(a, b):
    return _lgamma(a).astype(float) + _lgamma(b).astype(float) - _lgamma(a + b).astype(float)


def _betacf(x, a, b):
    """Lentz continued fraction for the incomplete beta (NR 'betacf' form).

    Vectorized over equally shaped arrays; returns the CF value h and a
    boolean array marking elements that failed to converge in _MAXIT steps.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
    d = 1.0 / d
    h = d.copy()
    pending = np.ones(x.shape, dtype=bool)
    for m in range(1, _MAXIT + 1):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
        c = 1.0 + aa / c
        np.copyto(c, _FPMIN, where=np.abs(c) < _FPMIN)
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
        c = 1.0 + aa / c
        np.copyto(c, _FPMIN, where=np.abs(c) < _FPMIN)
        d = 1.0 / d
        delta = d * c
        h *= delta
        pending &= np.abs(delta - 1.0) >= _EPS
        if not pending.any():
            break
    return h, pending


def _beta_series(x, a, b):
    """Power-series evaluation of I_x(a,b), used when the CF stalls.

    I_x(a,b) = x^a (1-x)^(b?0) ... series form
        I_x(a,b) = x^a / (a B(a,b)) * sum_n (a/(a+n)) ((1-b)_n / n!) x^n,
    convergent for x in [0,1); adequate on the CF-convergent side of the
    symmetry switch where it is only ever called.
    """
    x = np.asarray(x, dtype=float)
    total = a / (a + 0.0) * np.ones_like(x)  # n = 0 term == 1
    term = np.ones_like(x)
    for n in range(1, 10 * _MAXIT):
        term = term * (n - b) * x / n
        contrib = a / (a + n) * term
        total += contrib
        if np.all(np.abs(contrib) < _EPS * np.abs(total)):
            break
    front = np.exp(a * np.log(x) - np.log(a) - _lbeta(a, b))
    return front * total


def betainc_reg_arr(x, a, b):
    """Regularized incomplete beta I_x(a,b), elementwise on equal-shape arrays."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.empty_like(x)
    lo = x <= 0.0
    hi = x >= 1.0
    out[lo] = 0.0
    out[hi] = 1.0
    mid = ~(lo | hi)
    if mid.any():
        xm, am, bm = x[mid], a[mid], b[mid]
        # symmetry switch keeps the CF in its fast-convergence region
        swap = xm >= (am + 1.0) / (am + bm + 2.0)
        xs = np.where(swap, 1.0 - xm, xm)
        as_ = np.where(swap, bm, am)
        bs = np.where(swap, am, bm)
        front = np.exp(
            as_ * np.log(xs) + bs * np.log1p(-xs) - _lbeta(as_, bs)
        )
        h, pending = _betacf(xs, as_, bs)
        val = front * h / as_
        if pending.any():
            val[pending] = _beta_series(xs[pending], as_[pending], bs[pending])
        out[mid] = np.where(swap, 1.0 - val, val)
    return out


def betainc_reg(x, a, b):
    return float(betainc_reg_arr(np.array([x]), np.array([a]), np.array([b]))[0])


def _norm_cdf_arr(x):
    return 0.5 * _erfc(-x / _SQRT2).astype(float)


def _t_cdf_asym_arr(x, nu):
    # two-term 1/nu correction to the normal limit; abs error < 1e-12 for
    # nu >= 1e4, where the CF front factor starts losing digits
    phi = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    g1 = 0.25 * (x**3 + x)
    g2 = (-3.0 * x**7 + 7.0 * x**5 + 5.0 * x**3 + 3.0 * x) / 96.0
    return np.clip(_norm_cdf_arr(x) - phi * (g1 / nu - g2 / nu**2), 0.0, 1.0)


def t_cdf_arr(x, nu):
    """Student-t CDF, elementwise over equal-length x and nu arrays."""
    x = np.asarray(x, dtype=float)
    nu = np.asarray(nu, dtype=float)
    out = np.empty_like(x, dtype=float)
    tiny = np.abs(x) < 1e-4
    if tiny.any():
        # the nu/(nu+x^2) transform cannot resolve x this small; odd
        # Taylor series about 0 is exact to ~1e-20 here
        xt, nt = x[tiny], nu[tiny]
        c0 = np.exp(_t_logpdf_norm(nt))
        out[tiny] = 0.5 + c0 * (xt - (nt + 1.0) / (6.0 * nt) * xt**3)
    big = ~tiny & (nu >= _NU_ASYM)
    if big.any():
        out[big] = _t_cdf_asym_arr(x[big], nu[big])
    rest = ~tiny & ~big
    if rest.any():
        xr, nr = x[rest], nu[rest]
        xb = nr / (nr + xr * xr)
        tail = 0.5 * betainc_reg_arr(xb, 0.5 * nr, np.full_like(nr, 0.5))
        out[rest] = np.where(xr > 0.0, 1.0 - tail, tail)
    return out


def t_cdf(x, nu):
    return float(t_cdf_arr(np.array([x]), np.array([nu]))[0])


def _t_logpdf_norm(nu):
    # log of Gamma((nu+1)/2) / (sqrt(nu*pi) Gamma(nu/2))
    return (
        _lgamma(0.5 * (nu + 1.0)).astype(float)
        - _lgamma(0.5 * nu).astype(float)
        - 0.5 * np.log(nu * math.pi)
    )


def t_pdf_arr(x, nu):
    x = np.asarray(x, dtype=float)
    nu = np.asarray(nu, dtype=float)
    return np.exp(_t_logpdf_norm(nu) - 0.5 * (nu + 1.0) * np.log1p(x * x / nu))


def t_quantile_arr(p, nu):
    """Student-t quantile: vectorized bracketed bisection plus Newton polish."""
    p = np.asarray(p, dtype=float)
    nu = np.asarray(nu, dtype=float)
    pu = np.where(p < 0.5, 1.0 - p, p)  # solve on the upper half, flip after
    lo = np.zeros_like(pu)
    hi = np.ones_like(pu)
    for _ in range(1100):
        short = t_cdf_arr(hi, nu) < pu
        if not short.any():
            break
        lo[short] = hi[short]
        hi[short] = np.minimum(hi[short] * 2.0, 1e300)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = t_cdf_arr(mid, nu) < pu
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(4):
        err = t_cdf_arr(x, nu) - pu
        if np.all(np.abs(err) <= _QUANTILE_TOL):
            break
        step = err / np.maximum(t_pdf_arr(x, nu), _FPMIN)
        x = np.clip(x - step, lo, hi)
    x = np.where(pu == 0.5, 0.0, x)
    return np.where(p < 0.5, -x, x)


def t_quantile(p, nu):
    return float(t_quantile_arr(np.array([p]), np.array([nu]))[0])


def ks_scaled_f(z2_sorted, nu, scale):
    """Sup-norm distance of a sorted sample of squares to scale*F(1, nu).

    Uses the identity P(F(1,nu) <= y) = 2 T_nu(sqrt(y)) - 1; this is the
    hot loop of the distribution fit.
    """
    z2_sorted = np.asarray(z2_sorted, dtype=float)
    n = z2_sorted.size
    f = 2.0 * t_cdf_arr(np.sqrt(z2_sorted / scale), np.full(n, nu)) - 1.0
    i = np.arange(1, n + 1)
    return float(np.maximum(i / n - f, f - (i - 1.0) / n).max())
