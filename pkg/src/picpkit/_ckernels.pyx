# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: regularized incomplete beta, Student-t CDF/quantile,
and the KS objective against a scaled F(1, nu).

Same call surface as the NumPy fallback in picpkit._kernels_py; see that
module for the contract.  Continued fraction follows Lentz's method with a
power-series fallback; quantiles use bracketed bisection refined by Newton
steps on the CDF.
"""

from libc.math cimport lgamma, log, log1p, exp, sqrt, fabs, erfc, M_PI

import numpy as np

cdef double _EPS = 3e-16
cdef double _FPMIN = 1e-300
cdef int _MAXIT = 500
cdef double _QUANTILE_TOL = 1e-13
cdef double _NU_ASYM = 1e4
cdef double _SQRT2 = 1.4142135623730951
cdef double _INV_SQRT_2PI = 0.3989422804014327


cdef double _betacf(double x, double a, double b) nogil:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double aa, delta, h
    cdef int m, m2
    if fabs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < _EPS:
            return h
    return -h  # sign flags non-convergence; caller switches to the series


cdef double _beta_series(double x, double a, double b) nogil:
    cdef double total = 1.0
    cdef double term = 1.0
    cdef double contrib
    cdef int n
    for n in range(1, 10 * _MAXIT):
        term *= (n - b) * x / n
        contrib = a / (a + n) * term
        total += contrib
        if fabs(contrib) < _EPS * fabs(total):
            break
    return exp(a * log(x) - log(a)
               - (lgamma(a) + lgamma(b) - lgamma(a + b))) * total


cdef double _betainc(double x, double a, double b) nogil:
    cdef double front, h, val
    cdef bint swap
    cdef double xs, as_, bs
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    swap = x >= (a + 1.0) / (a + b + 2.0)
    if swap:
        xs = 1.0 - x
        as_ = b
        bs = a
    else:
        xs = x
        as_ = a
        bs = b
    h = _betacf(xs, as_, bs)
    if h < 0.0:
        val = _beta_series(xs, as_, bs)
    else:
        front = exp(as_ * log(xs) + bs * log1p(-xs)
                    - (lgamma(as_) + lgamma(bs) - lgamma(as_ + bs)))
        val = front * h / as_
    return 1.0 - val if swap else val


cdef double _t_cdf_asym(double x, double nu) nogil:
    # two-term 1/nu correction to the normal limit; abs error < 1e-12 for
    # nu >= 1e4, where the CF front factor starts losing digits
    cdef double phi = _INV_SQRT_2PI * exp(-0.5 * x * x)
    cdef double x2 = x * x
    cdef double g1 = 0.25 * (x2 * x + x)
    cdef double g2 = (((-3.0 * x2 + 7.0) * x2 + 5.0) * x2 + 3.0) * x / 96.0
    cdef double val = 0.5 * erfc(-x / _SQRT2) - phi * (g1 / nu - g2 / (nu * nu))
    if val < 0.0:
        return 0.0
    if val > 1.0:
        return 1.0
    return val


cdef double _t_cdf(double x, double nu) nogil:
    cdef double tail, c0
    if x == 0.0:
        return 0.5
    if fabs(x) < 1e-4:
        # the nu/(nu+x^2) transform cannot resolve x this small; odd
        # Taylor series about 0 is exact to ~1e-20 here
        c0 = exp(lgamma(0.5 * (nu + 1.0)) - lgamma(0.5 * nu) - 0.5 * log(nu * M_PI))
        return 0.5 + c0 * (x - (nu + 1.0) / (6.0 * nu) * x * x * x)
    if nu >= _NU_ASYM:
        return _t_cdf_asym(x, nu)
    tail = 0.5 * _betainc(nu / (nu + x * x), 0.5 * nu, 0.5)
    return 1.0 - tail if x > 0.0 else tail


cdef double _t_pdf(double x, double nu) nogil:
    return exp(lgamma(0.5 * (nu + 1.0)) - lgamma(0.5 * nu)
               - 0.5 * log(nu * M_PI)
               - 0.5 * (nu + 1.0) * log1p(x * x / nu))


cdef double _t_quantile(double p, double nu) nogil:
    cdef double pu = p
    cdef double lo = 0.0
    cdef double hi = 1.0
    cdef double mid, x, err
    cdef int i
    if p == 0.5:
        return 0.0
    if p < 0.5:
        pu = 1.0 - p
    while _t_cdf(hi, nu) < pu and hi < 1e300:
        lo = hi
        hi *= 2.0
    for i in range(48):
        mid = 0.5 * (lo + hi)
        if _t_cdf(mid, nu) < pu:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for i in range(4):
        err = _t_cdf(x, nu) - pu
        if fabs(err) <= _QUANTILE_TOL:
            break
        x -= err / _t_pdf(x, nu)
        if x < lo:
            x = lo
        elif x > hi:
            x = hi
    return -x if p < 0.5 else x


def betainc_reg(double x, double a, double b):
    return _betainc(x, a, b)


def t_cdf(double x, double nu):
    return _t_cdf(x, nu)


def t_quantile(double p, double nu):
    return _t_quantile(p, nu)


def betainc_reg_arr(const double[::1] x, const double[::1] a, const double[::1] b):
    cdef Py_ssize_t n = x.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _betainc(x[i], a[i], b[i])
    return out


def t_cdf_arr(const double[::1] x, const double[::1] nu):
    cdef Py_ssize_t n = x.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _t_cdf(x[i], nu[i])
    return out


def t_pdf_arr(const double[::1] x, const double[::1] nu):
    cdef Py_ssize_t n = x.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _t_pdf(x[i], nu[i])
    return out


def t_quantile_arr(const double[::1] p, const double[::1] nu):
    cdef Py_ssize_t n = p.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _t_quantile(p[i], nu[i])
    return out


def ks_scaled_f(const double[::1] z2_sorted, double nu, double scale):
    cdef Py_ssize_t n = z2_sorted.shape[0]
    cdef double inv = 1.0 / n
    cdef double dmax = 0.0
    cdef double f, d
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            f = 2.0 * _t_cdf(sqrt(z2_sorted[i] / scale), nu) - 1.0
            d = (i + 1) * inv - f
            if f - i * inv > d:
                d = f - i * inv
            if d > dmax:
                dmax = d
    return dmax
