"""Kernel backend selection.

The hot numerical loops (incomplete beta, t CDF/quantile, KS objective)
exist twice: a Cython extension (``picpkit._ckernels``) and a NumPy
fallback (``picpkit._kernels_py``).  The compiled backend is preferred when
importable; set ``PICPKIT_BACKEND=python`` or ``=c`` to force a choice
(benchmarks and tests use this).

Both backends are exact drop-ins; everything above this module is backend
agnostic.  The wrappers here normalize array arguments to contiguous
float64 so the backends can assume clean 1-d input.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_requested = os.environ.get("PICPKIT_BACKEND", "").strip().lower()

if _requested in ("python", "py"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise ImportError(
                "PICPKIT_BACKEND=c requested but picpkit._ckernels is not built"
            )
        _impl = _kernels_py
        BACKEND = "python"


def backend_name() -> str:
    return BACKEND


def _c1d(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64).ravel()


def betainc_reg(x: float, a: float, b: float) -> float:
    return _impl.betainc_reg(float(x), float(a), float(b))


def t_cdf(x: float, nu: float) -> float:
    return _impl.t_cdf(float(x), float(nu))


def t_quantile(p: float, nu: float) -> float:
    return _impl.t_quantile(float(p), float(nu))


def betainc_reg_arr(x, a, b) -> np.ndarray:
    x, a, b = np.broadcast_arrays(x, a, b)
    shape = x.shape
    out = _impl.betainc_reg_arr(_c1d(x), _c1d(a), _c1d(b))
    return np.asarray(out).reshape(shape)


def t_cdf_arr(x, nu) -> np.ndarray:
    x, nu = np.broadcast_arrays(x, nu)
    shape = x.shape
    out = _impl.t_cdf_arr(_c1d(x), _c1d(nu))
    return np.asarray(out).reshape(shape)


def t_pdf_arr(x, nu) -> np.ndarray:
    x, nu = np.broadcast_arrays(x, nu)
    shape = x.shape
    out = _impl.t_pdf_arr(_c1d(x), _c1d(nu))
    return np.asarray(out).reshape(shape)


def t_quantile_arr(p, nu) -> np.ndarray:
    p, nu = np.broadcast_arrays(p, nu)
    shape = p.shape
    out = _impl.t_quantile_arr(_c1d(p), _c1d(nu))
    return np.asarray(out).reshape(shape)


def ks_scaled_f(z2_sorted, nu: float, scale: float) -> float:
    return _impl.ks_scaled_f(_c1d(z2_sorted), float(nu), float(scale))
