"""Variance-based calibration statistics on z-score samples.

ZMS is the mean of squared z-scores (1 for average-calibrated
uncertainties), RCE the relative calibration error
(RMS(uE) - RMS(E)) / RMS(uE), and beta_gm the Groeneveld-Meeden robust
skewness (mean - median) / mean |x - median|, bounded in [-1, 1].  Applied
to Z^2, beta_gm gates testability: samples with beta_gm(Z^2) >= 0.80
cannot be reliably ZMS-tested (the interval-based test in
``picpkit.coverage`` uses the looser 0.85 gate).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

ZMS_SKEW_GATE = 0.80  # beta_gm(Z^2) at or above this: ZMS verdict is untestable
DEFAULT_N_BOOT = 5000
DEFAULT_LEVEL = 0.95


class Verdict(str, Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNTESTABLE = "untestable"

    def __str__(self) -> str:  # serialize as the bare word
        return self.value


# fixed row/column order for contingency tables and reports
VERDICT_ORDER = (Verdict.VALID, Verdict.INVALID, Verdict.UNTESTABLE)


@dataclass(frozen=True)
class ZmsResult:
    zms: float
    ci_low: float
    ci_high: float
    n_boot: int
    level: float
    verdict: Verdict
    beta_gm_z2: float
    degenerate: bool = False  # constant sample: zero-width bootstrap interval


def _as_sample(x, name: str = "sample") -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size < 1:
        raise ValueError(f"{name} must contain at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def z_scores(E, uE) -> np.ndarray:
    """Elementwise z-scores Z = E / uE; uE must be strictly positive."""
    e = _as_sample(E, "E")
    u = np.asarray(uE, dtype=float).ravel()
    if e.size != u.size:
        raise ValueError(f"length mismatch: {e.size} errors vs {u.size} uncertainties")
    bad = ~(np.isfinite(u) & (u > 0.0))
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise ValueError(
            f"uncertainties must be positive and finite; first offender at index "
            f"{idx} (value {u[idx]!r})"
        )
    return e / u


def zms(z) -> float:
    """Mean of squared z-scores."""
    z = _as_sample(z, "z")
    return float(np.mean(z * z))


def rce(E, uE) -> float:
    """Relative calibration error (RMS(uE) - RMS(E)) / RMS(uE)."""
    e = _as_sample(E, "E")
    u = np.asarray(uE, dtype=float).ravel()
    if e.size != u.size:
        raise ValueError(f"length mismatch: {e.size} errors vs {u.size} uncertainties")
    if not np.all(np.isfinite(u)) or not np.any(u > 0.0):
        raise ValueError("uncertainties must be finite with positive RMS")
    rms_u = float(np.sqrt(np.mean(u * u)))
    rms_e = float(np.sqrt(np.mean(e * e)))
    return (rms_u - rms_e) / rms_u


def beta_gm(x) -> float:
    """Groeneveld-Meeden skewness (mean - median) / mean |x - median|.

    Bounded in [-1, 1]; raises on a constant sample, where the denominator
    vanishes and skewness is undefined.
    """
    arr = _as_sample(x, "x")
    if arr.size < 2:
        raise ValueError("beta_gm needs at least two values")
    arr = np.sort(arr)  # pairwise summation depends on order; canonicalize
    med = float(np.median(arr))
    denom = float(np.mean(np.abs(arr - med)))
    if denom == 0.0:
        raise ValueError("beta_gm is undefined for a constant sample")
    num = float(np.mean(arr)) - med
    # |num| <= denom holds mathematically; rounding can overshoot by a ULP
    return min(1.0, max(-1.0, num / denom))


def bootstrap_ci_zms(
    z,
    n_boot: int = DEFAULT_N_BOOT,
    level: float = DEFAULT_LEVEL,
    seed=0,
) -> tuple[float, float]:
    """Percentile bootstrap interval for ZMS.

    Resampling operates on the sample sorted ascending, so the interval is
    invariant under permutations of the input (determinism contract).
    Replicates are drawn in chunks to bound memory at large m * n_boot.
    """
    z = _as_sample(z, "z")
    m = z.size
    if m < 2:
        raise ValueError("bootstrap needs at least two values")
    n_boot = int(n_boot)
    if n_boot < 100:
        raise ValueError(f"n_boot must be >= 100, got {n_boot}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be inside (0, 1), got {level}")
    z2 = np.sort(z * z)
    rng = np.random.default_rng(seed)
    stats = np.empty(n_boot)
    chunk = max(1, int(2e6) // m)
    done = 0
    while done < n_boot:
        take = min(chunk, n_boot - done)
        idx = rng.integers(0, m, size=(take, m))
        stats[done : done + take] = z2[idx].mean(axis=1)
        done += take
    alpha = 0.5 * (1.0 - level)
    lo, hi = np.quantile(stats, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def validate_zms(
    z,
    n_boot: int = DEFAULT_N_BOOT,
    level: float = DEFAULT_LEVEL,
    seed=0,
) -> ZmsResult:
    """ZMS = 1 test with bootstrap CI, gated by beta_gm(Z^2) >= 0.80."""
    z = _as_sample(z, "z")
    point = zms(z)
    z2 = z * z
    degenerate = bool(np.all(z2 == z2[0]))
    if degenerate:
        # resampling a constant can only return it; flag rather than bootstrap
        ci_low = ci_high = point
        skew = 0.0
    else:
        ci_low, ci_high = bootstrap_ci_zms(z, n_boot=n_boot, level=level, seed=seed)
        skew = beta_gm(z2)
    if skew >= ZMS_SKEW_GATE:
        verdict = Verdict.UNTESTABLE
    elif ci_low <= 1.0 <= ci_high:
        verdict = Verdict.VALID
    else:
        verdict = Verdict.INVALID
    return ZmsResult(
        zms=point,
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        n_boot=int(n_boot),
        level=float(level),
        verdict=verdict,
        beta_gm_z2=float(skew),
        degenerate=degenerate,
    )
