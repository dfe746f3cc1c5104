"""Interval-based calibration: PICP, Wilson intervals, and the LCP analysis.

The binding test is at the 95% level with a *fixed* enlargement factor
k = 1.96 (no distribution fit of the z-scores), validated through the
relaxed band test

    valid  iff  PICP+ >= 0.945  and  PICP- <= 0.955

where [PICP-, PICP+] is the continuity-corrected Wilson interval.  Samples
with beta_gm(Z^2) >= 0.85 are flagged untestable instead.  Fixed-k testing
is only nu-stable at the 95% level, so results for any other (k, target)
pair are marked diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import distributions
from .metrics import Verdict, _as_sample, beta_gm, z_scores

PICP_SKEW_GATE = 0.85  # beta_gm(Z^2) at or above this: PICP verdict is untestable
K95 = 1.96
PICP95_BAND = (0.945, 0.955)
BAND_HALF_WIDTH = 0.005
DEFAULT_CI_LEVEL = 0.95
DEFAULT_LCP_BINS = 20


@dataclass(frozen=True)
class CoverageResult:
    p_target: float
    k: float
    hits: int
    m: int
    picp: float
    ci_low: float
    ci_high: float
    level: float
    verdict: Verdict
    beta_gm_z2: float
    diagnostic: bool = False


@dataclass(frozen=True)
class LcpBin:
    index: int
    uE_low: float
    uE_high: float
    coverage: CoverageResult


@dataclass(frozen=True)
class LcpResult:
    bins: tuple[LcpBin, ...]
    n_bins: int
    overall: CoverageResult


def k_factor(p: float, nu: float) -> float:
    """Half-width of the symmetric p-interval for unit-variance ts(nu)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be inside (0, 1), got {p}")
    return float(distributions.ts_quantile(0.5 * (1.0 + p), nu))


def coverage_of_interval(a: float, nu: float) -> float:
    """P(|Z| <= a) for Z ~ ts(nu)."""
    a = float(a)
    if a <= 0.0:
        raise ValueError(f"interval half-width must be positive, got {a}")
    return 2.0 * float(distributions.ts_cdf(a, nu)) - 1.0


def picp(z, k: float) -> tuple[int, float]:
    """Count and fraction of |z| <= k (boundary values count as hits)."""
    z = _as_sample(z, "z")
    k = float(k)
    if k <= 0.0:
        raise ValueError(f"k must be positive, got {k}")
    hits = int(np.count_nonzero(np.abs(z) <= k))
    return hits, hits / z.size


def wilson_ci(hits: int, m: int, level: float = DEFAULT_CI_LEVEL) -> tuple[float, float]:
    """Continuity-corrected Wilson interval for a binomial proportion.

    Newcombe's closed form; the bounds are forced to exactly 0 (hits = 0)
    and 1 (hits = m) at the boundaries.
    """
    hits = int(hits)
    m = int(m)
    if m < 1 or not 0 <= hits <= m:
        raise ValueError(f"need 0 <= hits <= m with m >= 1, got hits={hits}, m={m}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be inside (0, 1), got {level}")
    z = _normal_quantile(0.5 * (1.0 + level))
    p = hits / m
    q = 1.0 - p
    z2 = z * z
    denom = 2.0 * (m + z2)
    if hits == 0:
        low = 0.0
    else:
        rad = z2 - 2.0 - 1.0 / m + 4.0 * p * (m * q + 1.0)
        low = max(0.0, (2.0 * m * p + z2 - 1.0 - z * math.sqrt(max(rad, 0.0))) / denom)
    if hits == m:
        high = 1.0
    else:
        rad = z2 + 2.0 - 1.0 / m + 4.0 * p * (m * q - 1.0)
        high = min(1.0, (2.0 * m * p + z2 + 1.0 + z * math.sqrt(max(rad, 0.0))) / denom)
    return low, high


def _normal_quantile(p: float) -> float:
    # N(0,1) is the nu -> inf limit; at nu = 1e12 the t quantile matches it
    # to ~1e-13, well inside the Wilson interval's own approximation error.
    return float(distributions.t_quantile(p, 1e12))


def _coverage_result(
    z: np.ndarray,
    p_target: float,
    k: float,
    level: float,
    gate: float,
    band: tuple[float, float],
    diagnostic: bool,
) -> CoverageResult:
    hits, frac = picp(z, k)
    ci_low, ci_high = wilson_ci(hits, z.size, level)
    z2 = z * z
    skew = 0.0 if np.all(z2 == z2[0]) else beta_gm(z2)
    if skew >= gate:
        verdict = Verdict.UNTESTABLE
    elif ci_high >= band[0] and ci_low <= band[1]:
        verdict = Verdict.VALID
    else:
        verdict = Verdict.INVALID
    return CoverageResult(
        p_target=float(p_target),
        k=float(k),
        hits=hits,
        m=int(z.size),
        picp=frac,
        ci_low=ci_low,
        ci_high=ci_high,
        level=float(level),
        verdict=verdict,
        beta_gm_z2=float(skew),
        diagnostic=diagnostic,
    )


def validate_picp95(z, level: float = DEFAULT_CI_LEVEL) -> CoverageResult:
    """The binding 95% test: fixed k = 1.96, band 0.945-0.955, 0.85 gate."""
    z = _as_sample(z, "z")
    return _coverage_result(
        z,
        p_target=0.95,
        k=K95,
        level=level,
        gate=PICP_SKEW_GATE,
        band=PICP95_BAND,
        diagnostic=False,
    )


def picp_diagnostic(
    z, p_target: float, k: float, level: float = DEFAULT_CI_LEVEL
) -> CoverageResult:
    """Coverage test at a caller-chosen (target, k).

    Same machinery as the 95% test with the band p_target +/- 0.005, but
    flagged diagnostic: a fixed enlargement factor is only nu-stable near
    the 95% level, so off-95 verdicts are indicative rather than binding.
    """
    z = _as_sample(z, "z")
    p_target = float(p_target)
    if not 0.0 < p_target < 1.0:
        raise ValueError(f"p_target must be inside (0, 1), got {p_target}")
    band = (p_target - BAND_HALF_WIDTH, p_target + BAND_HALF_WIDTH)
    return _coverage_result(
        z,
        p_target=p_target,
        k=k,
        level=level,
        gate=PICP_SKEW_GATE,
        band=band,
        diagnostic=True,
    )


def bin_by_uncertainty(uE, n_bins: int) -> list[np.ndarray]:
    """Split indices into n_bins contiguous groups of uE sorted ascending.

    Sizes differ by at most one; the first (size mod n_bins) groups take
    the extra element.  Ties keep original input order (stable sort).
    """
    u = np.asarray(uE, dtype=float).ravel()
    n_bins = int(n_bins)
    if n_bins < 1:
        raise ValueError(f"n_bins must be >= 1, got {n_bins}")
    if u.size < n_bins:
        raise ValueError(f"cannot split {u.size} points into {n_bins} bins")
    order = np.argsort(u, kind="stable")
    base, extra = divmod(u.size, n_bins)
    groups = []
    start = 0
    for i in range(n_bins):
        size = base + (1 if i < extra else 0)
        groups.append(order[start : start + size])
        start += size
    return groups


def lcp_analysis(
    E,
    uE,
    n_bins: int = DEFAULT_LCP_BINS,
    level: float = DEFAULT_CI_LEVEL,
) -> LcpResult:
    """Local coverage: the 95% PICP test per uncertainty-sorted bin.

    Each bin gets its own z-scores, 0.85 testability gate, Wilson interval
    and band verdict; ``overall`` is the plain full-sample 95% test.
    """
    z = z_scores(E, uE)
    u = np.asarray(uE, dtype=float).ravel()
    groups = bin_by_uncertainty(u, n_bins)
    bins = []
    for i, idx in enumerate(groups):
        result = _coverage_result(
            z[idx],
            p_target=0.95,
            k=K95,
            level=level,
            gate=PICP_SKEW_GATE,
            band=PICP95_BAND,
            diagnostic=False,
        )
        bins.append(
            LcpBin(
                index=i,
                uE_low=float(u[idx].min()),
                uE_high=float(u[idx].max()),
                coverage=result,
            )
        )
    overall = validate_picp95(z, level=level)
    return LcpResult(bins=tuple(bins), n_bins=int(n_bins), overall=overall)
