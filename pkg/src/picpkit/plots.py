"""Deterministic SVG rendering of the analysis figures.

Self-contained writer (no plotting dependency) so identical inputs give
byte-identical documents: fixed float formatting, no timestamps, no
generated ids.  Verdict colors follow the blue / red / gray convention
(valid / invalid / untestable); admissible bands are light gray rectangles
and theoretical curves are cyan.

Kinds understood by ``render_plot``:

    k95_curve       enlargement factor vs nu, maximum marked
    coverage_curve  coverage of a fixed +/-1.96 interval vs nu, with band
    picp_vs_skew    PICP with error bars vs beta_gm(Z^2) (sweep or reports)
    lcp_panel       per-bin local coverage with error bars and band
    fit_density     Z^2 histogram with the fitted scaled-F density
"""

from __future__ import annotations

import math

import numpy as np

from .analysis import Report
from .coverage import K95, PICP95_BAND, coverage_of_interval, k_factor
from .distributions import ScaledF, fs_pdf
from .fitting import FitResult
from .metrics import Verdict
from .simulation import SimPoint

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=64, right=24, top=36, bottom=48)

VERDICT_COLOR = {
    Verdict.VALID: "#2166ac",
    Verdict.INVALID: "#b2182b",
    Verdict.UNTESTABLE: "#878787",
}
BAND_COLOR = "#d9d9d9"
CURVE_COLOR = "#00b7c4"  # theoretical reference


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


class _Canvas:
    """Minimal SVG assembly with data-space coordinates."""

    def __init__(self, x_range, y_range, log_x=False, title=""):
        self.parts: list[str] = []
        self.log_x = log_x
        self.x0, self.x1 = (math.log10(v) for v in x_range) if log_x else x_range
        self.y0, self.y1 = y_range
        self.title = title

    def _px(self, x: float) -> float:
        if self.log_x:
            x = math.log10(x)
        plot_w = WIDTH - MARGIN["left"] - MARGIN["right"]
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * plot_w

    def _py(self, y: float) -> float:
        plot_h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        return MARGIN["top"] + (self.y1 - y) / (self.y1 - self.y0) * plot_h

    def band(self, y_low: float, y_high: float, color: str = BAND_COLOR):
        x = MARGIN["left"]
        w = WIDTH - MARGIN["left"] - MARGIN["right"]
        y = self._py(y_high)
        h = self._py(y_low) - y
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="{color}"/>'
        )

    def polyline(self, xs, ys, color: str, width: float = 1.5, dash: str = ""):
        pts = " ".join(f"{_fmt(self._px(x))},{_fmt(self._py(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(width)}"{extra}/>'
        )

    def point(self, x, y, color: str, r: float = 3.5):
        self.parts.append(
            f'<circle cx="{_fmt(self._px(x))}" cy="{_fmt(self._py(y))}" '
            f'r="{_fmt(r)}" fill="{color}"/>'
        )

    def error_bar(self, x, y_low, y_high, color: str, cap: float = 3.0):
        px = self._px(x)
        y1, y2 = self._py(y_high), self._py(y_low)
        self.parts.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(y1)}" x2="{_fmt(px)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="1.2"/>'
        )
        for yy in (y1, y2):
            self.parts.append(
                f'<line x1="{_fmt(px - cap)}" y1="{_fmt(yy)}" '
                f'x2="{_fmt(px + cap)}" y2="{_fmt(yy)}" '
                f'stroke="{color}" stroke-width="1.2"/>'
            )

    def hline(self, y: float, color: str = "#666666", dash: str = "4,3"):
        self.parts.append(
            f'<line x1="{MARGIN["left"]}" y1="{_fmt(self._py(y))}" '
            f'x2="{WIDTH - MARGIN["right"]}" y2="{_fmt(self._py(y))}" '
            f'stroke="{color}" stroke-width="1" stroke-dasharray="{dash}"/>'
        )

    def text(self, x_px: float, y_px: float, s: str, size: int = 11, anchor="middle"):
        self.parts.append(
            f'<text x="{_fmt(x_px)}" y="{_fmt(y_px)}" font-size="{size}" '
            f'text-anchor="{anchor}" font-family="sans-serif">{s}</text>'
        )

    def margin_text(self, y: float, s: str):
        self.text(WIDTH - MARGIN["right"] + 2, self._py(y) + 4, s, anchor="start", size=10)

    def axes(self, x_ticks, y_ticks, x_label: str, y_label: str):
        left, right = MARGIN["left"], WIDTH - MARGIN["right"]
        top, bottom = MARGIN["top"], HEIGHT - MARGIN["bottom"]
        self.parts.append(
            f'<rect x="{left}" y="{top}" width="{right - left}" '
            f'height="{bottom - top}" fill="none" stroke="#000000"/>'
        )
        for t in x_ticks:
            px = self._px(t)
            self.parts.append(
                f'<line x1="{_fmt(px)}" y1="{bottom}" x2="{_fmt(px)}" '
                f'y2="{bottom + 4}" stroke="#000000"/>'
            )
            self.text(px, bottom + 16, _fmt(t))
        for t in y_ticks:
            py = self._py(t)
            self.parts.append(
                f'<line x1="{left - 4}" y1="{_fmt(py)}" x2="{left}" '
                f'y2="{_fmt(py)}" stroke="#000000"/>'
            )
            self.text(left - 8, py + 4, _fmt(t), anchor="end")
        self.text((left + right) / 2, HEIGHT - 10, x_label, size=12)
        self.parts.append(
            f'<text x="16" y="{(top + bottom) / 2}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif" '
            f'transform="rotate(-90 16 {(top + bottom) / 2})">{y_label}</text>'
        )
        if self.title:
            self.text(WIDTH / 2, 20, self.title, size=13)

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )


_NU_TICKS = (2, 3, 5, 10, 20, 50, 100)


def _nu_grid(n: int = 300) -> np.ndarray:
    return np.geomspace(2.05, 100.0, n)


def render_k95_curve() -> str:
    grid = _nu_grid()
    ks = np.array([k_factor(0.95, nu) for nu in grid])
    i_max = int(np.argmax(ks))
    canvas = _Canvas(
        (2.0, 100.0),
        (min(1.5, float(ks.min()) - 0.05), 2.1),
        log_x=True,
        title="95% enlargement factor for unit-variance t(nu)",
    )
    canvas.hline(1.96)
    canvas.polyline(grid, ks, "#000000")
    canvas.point(grid[i_max], ks[i_max], VERDICT_COLOR[Verdict.INVALID], r=4.0)
    canvas.text(
        canvas._px(grid[i_max]),
        canvas._py(ks[i_max]) - 8,
        f"max at nu={_fmt(grid[i_max])}",
        size=10,
    )
    canvas.axes(_NU_TICKS, (1.5, 1.6, 1.7, 1.8, 1.9, 1.96, 2.0), "nu", "k95")
    return canvas.render()


def render_coverage_curve() -> str:
    grid = _nu_grid()
    cov = np.array([coverage_of_interval(K95, nu) for nu in grid])
    canvas = _Canvas(
        (2.0, 100.0),
        (0.94, max(1.0, float(cov.max()) + 0.005)),
        log_x=True,
        title="Coverage of a fixed +/-1.96 interval under t_s(nu)",
    )
    canvas.band(*PICP95_BAND)
    canvas.hline(0.95)
    canvas.polyline(grid, cov, "#000000")
    canvas.axes(_NU_TICKS, (0.94, 0.95, 0.96, 0.97, 0.98, 0.99, 1.0), "nu", "coverage")
    return canvas.render()


def _picp_rows(obj):
    rows = []
    for item in obj:
        if isinstance(item, SimPoint):
            rows.append((item.beta_gm_z2, item.coverage, item.theoretical))
        elif isinstance(item, Report):
            rows.append((item.beta_gm_z2, item.picp95, None))
        else:
            raise TypeError(f"cannot plot {type(item).__name__} as picp_vs_skew")
    return sorted(rows, key=lambda r: r[0])


def render_picp_vs_skew(points) -> str:
    rows = _picp_rows(points)
    if not rows:
        raise ValueError("nothing to plot")
    lo = min(min(c.ci_low for _, c, _ in rows), PICP95_BAND[0]) - 0.01
    xs = [r[0] for r in rows]
    span = (min(xs), max(xs))
    pad = 0.02 * max(span[1] - span[0], 1e-6)
    canvas = _Canvas(
        (span[0] - pad, span[1] + pad),
        (max(0.0, lo), 1.005),
        title="PICP95 vs skewness of squared z-scores",
    )
    canvas.band(*PICP95_BAND)
    theo = [(b, t) for b, _, t in rows if t is not None]
    if theo:
        canvas.polyline([b for b, _ in theo], [t for _, t in theo], CURVE_COLOR, 2.0)
    for b, c, _ in rows:
        color = VERDICT_COLOR[c.verdict]
        canvas.error_bar(b, c.ci_low, c.ci_high, color)
        canvas.point(b, c.picp, color)
    x_ticks = np.round(np.linspace(span[0], span[1], 5), 2)
    y_lo = max(0.0, lo)
    y_ticks = np.round(np.linspace(y_lo, 1.0, 6), 3)
    canvas.axes(x_ticks, y_ticks, "beta_gm(Z^2)", "PICP95")
    return canvas.render()


def render_lcp_panel(lcp_result) -> str:
    if isinstance(lcp_result, Report):
        if lcp_result.lcp is None:
            raise ValueError("report carries no LCP analysis")
        lcp_result = lcp_result.lcp
    bins = lcp_result.bins
    lo = min(min(b.coverage.ci_low for b in bins), PICP95_BAND[0]) - 0.01
    canvas = _Canvas(
        (0.5, len(bins) + 0.5),
        (max(0.0, lo), 1.005),
        title=f"Local coverage, {lcp_result.n_bins} uncertainty-sorted bins",
    )
    canvas.band(*PICP95_BAND)
    canvas.hline(0.95)
    for b in bins:
        color = VERDICT_COLOR[b.coverage.verdict]
        canvas.error_bar(b.index + 1, b.coverage.ci_low, b.coverage.ci_high, color)
        canvas.point(b.index + 1, b.coverage.picp, color)
    canvas.margin_text(lcp_result.overall.picp, _fmt(lcp_result.overall.picp))
    step = max(1, len(bins) // 10)
    x_ticks = list(range(1, len(bins) + 1, step))
    y_lo = max(0.0, lo)
    y_ticks = np.round(np.linspace(y_lo, 1.0, 6), 3)
    canvas.axes(x_ticks, y_ticks, "bin (increasing uE)", "local PICP95")
    return canvas.render()


def render_fit_density(z2, fit: FitResult, n_bins: int = 60) -> str:
    z2 = np.asarray(z2, dtype=float).ravel()
    if z2.size == 0:
        raise ValueError("empty sample")
    x_max = float(np.quantile(z2, 0.99))
    if x_max <= 0.0:
        x_max = float(z2.max()) or 1.0
    counts, edges = np.histogram(z2, bins=n_bins, range=(0.0, x_max), density=True)
    params = ScaledF(nu=fit.nu, scale=fit.scale)
    grid = np.linspace(x_max / 400.0, x_max, 200)
    dens = fs_pdf(grid, params)
    y_max = 1.1 * max(float(np.max(counts)), float(np.max(dens)))
    canvas = _Canvas(
        (0.0, x_max),
        (0.0, y_max),
        title=f"Z^2 histogram vs fitted scaled F(1, nu), nu={_fmt(fit.nu)}",
    )
    for c, e0, e1 in zip(counts, edges[:-1], edges[1:]):
        x = canvas._px(e0)
        w = canvas._px(e1) - x
        y = canvas._py(float(c))
        h = canvas._py(0.0) - y
        canvas.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="#c6dbef" stroke="#ffffff" stroke-width="0.5"/>'
        )
    canvas.polyline(grid, dens, VERDICT_COLOR[Verdict.VALID], 2.0)
    x_ticks = np.round(np.linspace(0.0, x_max, 6), 2)
    y_ticks = np.round(np.linspace(0.0, y_max, 5), 2)
    canvas.axes(x_ticks, y_ticks, "Z^2", "density")
    return canvas.render()


def render_plot(obj, kind: str) -> str:
    """Render one of the known figure kinds to an SVG string."""
    if kind == "k95_curve":
        return render_k95_curve()
    if kind == "coverage_curve":
        return render_coverage_curve()
    if kind == "picp_vs_skew":
        return render_picp_vs_skew(obj)
    if kind == "lcp_panel":
        return render_lcp_panel(obj)
    if kind == "fit_density":
        z2, fit = obj
        return render_fit_density(z2, fit)
    raise ValueError(f"unknown plot kind {kind!r}")
