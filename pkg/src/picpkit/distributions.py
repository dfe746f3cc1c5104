"""Student-t and scaled Fisher-Snedecor distributions.

Everything is expressed through the regularized incomplete beta; the unit
variance forms are

    ts(nu)     = t(nu) * sqrt((nu-2)/nu)          (needs nu > 2)
    Fs(1, nu)  = scale * F(1, nu)

with ``P(F(1,nu) <= y) = 2 T_nu(sqrt(y)) - 1``.  When Z ~ ts(nu), Z^2 is
Fs(1, nu) with scale (nu-2)/nu, which has mean exactly 1.

Scalars in, floats out; array-likes in, float64 arrays out.  Sampling uses
NumPy's PCG64 generator (the documented, seedable PRNG for the whole
package) via the normal / sqrt(chi2/nu) ratio construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


def _check_nu(nu: float, minimum: float, what: str) -> float:
    nu = float(nu)
    if not np.isfinite(nu) or nu <= minimum:
        raise ValueError(f"{what} requires nu > {minimum}, got {nu}")
    return nu


def _scalar_or_array(x, fn_scalar, fn_array):
    if np.ndim(x) == 0:
        return fn_scalar(float(x))
    return fn_array(np.asarray(x, dtype=float))


def reg_inc_beta(x, a: float, b: float):
    """Regularized incomplete beta I_x(a, b), accurate to ~1e-12 absolute."""
    a = float(a)
    b = float(b)
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0) or np.any(xs > 1.0):
        raise ValueError("x must lie in [0, 1]")
    return _scalar_or_array(
        x,
        lambda v: kernels.betainc_reg(v, a, b),
        lambda v: kernels.betainc_reg_arr(v, a, b),
    )


def t_cdf(x, nu: float):
    """CDF of Student's t with nu > 0 degrees of freedom."""
    nu = _check_nu(nu, 0.0, "t_cdf")
    return _scalar_or_array(
        x, lambda v: kernels.t_cdf(v, nu), lambda v: kernels.t_cdf_arr(v, nu)
    )


def t_pdf(x, nu: float):
    nu = _check_nu(nu, 0.0, "t_pdf")
    return _scalar_or_array(
        x,
        lambda v: float(kernels.t_pdf_arr(np.array([v]), nu)[0]),
        lambda v: kernels.t_pdf_arr(v, nu),
    )


def t_quantile(p, nu: float):
    """Inverse t CDF; |cdf(result) - p| <= 1e-10."""
    nu = _check_nu(nu, 0.0, "t_quantile")
    ps = np.asarray(p, dtype=float)
    if np.any(ps <= 0.0) or np.any(ps >= 1.0):
        raise ValueError("p must lie strictly inside (0, 1)")
    return _scalar_or_array(
        p, lambda v: kernels.t_quantile(v, nu), lambda v: kernels.t_quantile_arr(v, nu)
    )


def ts_scale(nu: float) -> float:
    """Factor turning t(nu) into the unit-variance ts(nu)."""
    nu = _check_nu(nu, 2.0, "unit-variance scaling")
    return float(np.sqrt((nu - 2.0) / nu))


def ts_cdf(x, nu: float):
    """CDF of the unit-variance scaled Student's t (nu > 2)."""
    s = ts_scale(nu)
    return t_cdf(np.asarray(x, dtype=float) / s if np.ndim(x) else float(x) / s, nu)


def ts_quantile(p, nu: float):
    """Quantile of the unit-variance scaled Student's t (nu > 2)."""
    s = ts_scale(nu)
    q = t_quantile(p, nu)
    return q * s


@dataclass(frozen=True)
class ScaledF:
    """Parameters of scale * F(1, nu)."""

    nu: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.nu > 0.0 and np.isfinite(self.nu)):
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not (self.scale > 0.0 and np.isfinite(self.scale)):
            raise ValueError(f"scale must be positive, got {self.scale}")

    @classmethod
    def unit_mean(cls, nu: float) -> "ScaledF":
        """The law of Z^2 for Z ~ ts(nu): scale (nu-2)/nu, mean exactly 1."""
        nu = _check_nu(nu, 2.0, "unit-mean scaled F")
        return cls(nu=nu, scale=(nu - 2.0) / nu)

    def mean(self) -> float:
        if self.nu <= 2.0:
            return float("inf")
        return self.scale * self.nu / (self.nu - 2.0)


def fs_cdf(x, params: ScaledF):
    """CDF of scale * F(1, nu) at x >= 0."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise ValueError("scaled-F support is x >= 0")
    y = np.sqrt(xs / params.scale)
    out = 2.0 * t_cdf(y if np.ndim(x) else float(y), params.nu) - 1.0
    return out


def fs_pdf(x, params: ScaledF):
    """Density of scale * F(1, nu); diverges like x^(-1/2) at the origin."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise ValueError("scaled-F support is x >= 0")
    y = np.sqrt(xs / params.scale)
    dens = t_pdf(y if np.ndim(x) else float(y), params.nu) / np.sqrt(xs * params.scale)
    return dens


def sample_ts(nu: float, m: int, seed) -> np.ndarray:
    """Draw m i.i.d. unit-variance ts(nu) values.

    Construction: N(0,1) / sqrt(chi2_nu / nu), rescaled by sqrt((nu-2)/nu).
    Deterministic for a given (nu, m, seed); seed may be an int or a
    numpy SeedSequence.
    """
    nu = _check_nu(nu, 2.0, "sample_ts")
    m = int(m)
    if m < 1:
        raise ValueError(f"sample size must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    normal = rng.standard_normal(m)
    chi2 = rng.chisquare(nu, m)
    return normal / np.sqrt(chi2 / nu) * ts_scale(nu)
