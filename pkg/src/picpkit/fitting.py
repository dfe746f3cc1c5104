"""Scaled Fisher-Snedecor fit to squared z-scores.

Maximum goodness-of-fit estimation: minimize the Kolmogorov-Smirnov
distance between the sample of Z^2 values and scale * F(1, nu), with both
parameters free (log-space Nelder-Mead, multi-start).  A constrained
unit-mean mode ties scale = (nu-2)/nu for theory-consistent fits.

The fitted nu is indicative only: the KS landscape flattens as nu grows
(a quasi-normal sample is equally well fit by any large nu), so large
fitted values mean "close to normal", not a sharp estimate, and nu is
never used as a testability gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import ScaledF, fs_cdf

FIT_STARTS = (3.0, 6.0, 12.0, 50.0, 500.0)
MIN_RELIABLE_SIZE = 50


@dataclass(frozen=True)
class FitResult:
    nu: float
    scale: float
    ks: float
    converged: bool
    n_restarts_used: int
    n: int
    unit_mean: bool = False
    small_sample: bool = False  # n < 50: fit quality flagged unreliable


def ks_distance(sample, cdf) -> float:
    """Sup-norm distance between the sample ECDF and a distribution CDF.

    ``cdf`` is a callable evaluated on the sorted sample; the usual
    one-sample statistic max_i( i/n - F(x_(i)), F(x_(i)) - (i-1)/n ).
    """
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("sample must be nonempty")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(np.maximum(i / n - f, f - (i - 1.0) / n).max())


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Asymptotic one-sample KS critical value sqrt(-ln(alpha/2)/(2n))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be inside (0, 1)")
    return math.sqrt(-0.5 * math.log(0.5 * alpha) / n)


def nelder_mead(
    objective,
    x0,
    *,
    step: float = 0.25,
    reflection: float = 1.0,
    expansion: float = 2.0,
    contraction: float = 0.5,
    shrink: float = 0.5,
    ftol: float = 1e-9,
    max_iter: int = 2000,
):
    """Simplex minimization; returns (x_best, f_best, converged).

    Converged means the spread of objective values across the simplex fell
    below ftol within max_iter iterations.  Fully deterministic: no
    randomness, ties resolved by stable sorting.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    n = x0.size
    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise ValueError("objective is not finite at the starting point")
    simplex = [x0]
    for i in range(n):
        vertex = x0.copy()
        vertex[i] += step if vertex[i] == 0.0 else step * max(1.0, abs(vertex[i]))
        simplex.append(vertex)
    values = [f0] + [float(objective(v)) for v in simplex[1:]]
    if not all(math.isfinite(v) for v in values):
        raise ValueError("objective is not finite on the initial simplex")

    converged = False
    for _ in range(max_iter):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] < ftol:
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + reflection * (centroid - worst)
        f_r = float(objective(reflected))
        if f_r < values[0]:
            expanded = centroid + expansion * (reflected - centroid)
            f_e = float(objective(expanded))
            if f_e < f_r:
                simplex[-1], values[-1] = expanded, f_e
            else:
                simplex[-1], values[-1] = reflected, f_r
        elif f_r < values[-2]:
            simplex[-1], values[-1] = reflected, f_r
        else:
            contracted = centroid + contraction * (worst - centroid)
            f_c = float(objective(contracted))
            if f_c < values[-1]:
                simplex[-1], values[-1] = contracted, f_c
            else:
                best = simplex[0]
                simplex = [best] + [
                    best + shrink * (v - best) for v in simplex[1:]
                ]
                values = [values[0]] + [float(objective(v)) for v in simplex[1:]]
    order = np.argsort(values, kind="stable")
    return simplex[order[0]].copy(), values[order[0]], converged


def fit_scaled_f(z2, unit_mean: bool = False) -> FitResult:
    """Fit scale * F(1, nu) to squared z-scores by KS-distance minimization.

    Multi-start over nu in FIT_STARTS with the starting scale taken from
    the sample mean; the lowest final objective wins, ties going to the
    earliest start.  Optimization runs in log-parameter space, so
    positivity needs no constraint handling.
    """
    z2 = np.asarray(z2, dtype=float).ravel()
    if z2.size < 2:
        raise ValueError("need at least two squared z-scores")
    if np.any(z2 < 0.0) or not np.all(np.isfinite(z2)):
        raise ValueError("squared z-scores must be finite and >= 0")
    if np.all(z2 == 0.0):
        raise ValueError("degenerate all-zero sample cannot be fitted")
    xs = np.sort(z2)
    mean = float(z2.mean())
    small = z2.size < MIN_RELIABLE_SIZE

    best = None
    for start_index, nu0 in enumerate(FIT_STARTS):
        if unit_mean:

            def objective(p):
                nu = math.exp(min(p[0], 700.0))
                if nu <= 2.0:  # unit-mean scale (nu-2)/nu needs nu > 2
                    return 2.0
                return kernels.ks_scaled_f(xs, nu, (nu - 2.0) / nu)

            x0 = [math.log(nu0)]
        else:

            def objective(p):
                nu = math.exp(min(p[0], 700.0))
                scale = math.exp(min(p[1], 700.0))
                if nu <= 0.0 or scale <= 0.0:  # exp underflow
                    return 2.0
                return kernels.ks_scaled_f(xs, nu, scale)

            scale0 = mean * (nu0 - 2.0) / nu0
            x0 = [math.log(nu0), math.log(scale0)]
        x_best, f_best, converged = nelder_mead(objective, x0)
        # strict < keeps the earliest start on ties (order independence)
        if best is None or f_best < best[1]:
            best = (x_best, f_best, converged, start_index)

    x_best, _, converged, _ = best
    nu = math.exp(min(x_best[0], 700.0))
    if unit_mean:
        scale = (nu - 2.0) / nu
    else:
        scale = math.exp(min(x_best[1], 700.0))
    # recompute through the generic path so the reported distance is
    # independently reproducible from (nu, scale)
    ks = ks_distance(xs, lambda v: fs_cdf(v, ScaledF(nu=nu, scale=scale)))
    return FitResult(
        nu=nu,
        scale=scale,
        ks=ks,
        converged=converged,
        n_restarts_used=len(FIT_STARTS),
        n=int(z2.size),
        unit_mean=unit_mean,
        small_sample=small,
    )
