"""Synthetic reliability study of the 95% coverage test.

Draws ts(nu) samples over a nu grid, runs the binding PICP test on each,
and pairs the outcome with the theoretical coverage of a fixed +/-1.96
interval.  Reproduces the pattern that fixed-k testing breaks down
(untestable or invalid) once nu drops to ~3 and below, which in Z^2
skewness terms is beta_gm(Z^2) >= 0.85.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coverage import K95, CoverageResult, coverage_of_interval, validate_picp95
from .distributions import sample_ts
from .seeding import substream

DEFAULT_GRID_POINTS = 40
DEFAULT_GRID_RANGE = (2.1, 100.0)
DEFAULT_M = 10_000


@dataclass(frozen=True)
class SimPoint:
    nu: float
    beta_gm_z2: float
    coverage: CoverageResult
    theoretical: float  # coverage_of_interval(1.96, nu)


def default_grid(
    n_points: int = DEFAULT_GRID_POINTS,
    lo: float = DEFAULT_GRID_RANGE[0],
    hi: float = DEFAULT_GRID_RANGE[1],
) -> np.ndarray:
    """Log-spaced nu grid, dense enough to resolve the nu <= 3 transition."""
    if n_points < 1:
        raise ValueError("need at least one grid point")
    if not 2.0 < lo <= hi:
        raise ValueError("grid must lie inside (2, inf)")
    return np.geomspace(lo, hi, n_points)


def sweep(nu_grid=None, m: int = DEFAULT_M, seed: int = 0) -> list[SimPoint]:
    """One PICP_95 evaluation per grid nu, each on its own substream.

    Substreams are derived from (seed, grid index), so extending the grid
    appends new points without perturbing existing ones.  Output order
    follows the grid.
    """
    grid = default_grid() if nu_grid is None else np.asarray(nu_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("nu_grid must be a nonempty 1-d sequence")
    if np.any(grid <= 2.0):
        raise ValueError("all grid values must exceed 2 (unit variance needs nu > 2)")
    m = int(m)
    if m < 100:
        raise ValueError(f"m must be >= 100, got {m}")
    points = []
    for i, nu in enumerate(grid):
        z = sample_ts(nu, m, substream(seed, i))
        result = validate_picp95(z)
        points.append(
            SimPoint(
                nu=float(nu),
                beta_gm_z2=result.beta_gm_z2,
                coverage=result,
                theoretical=coverage_of_interval(K95, float(nu)),
            )
        )
    return points
