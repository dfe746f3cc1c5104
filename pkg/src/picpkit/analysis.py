"""End-to-end dataset analysis, report serialization, and the verdict
contingency table.

``analyze`` runs the full pipeline on one dataset: variance-based testing
(ZMS with bootstrap CI), RCE, shape diagnostics, the binding 95% coverage
test, the 1-sigma diagnostic, and optionally the 20-bin local coverage
analysis and the scaled-F fit of Z^2.  All randomness flows from one
master seed through per-dataset substreams, so re-running a report is
byte-identical and dataset order never matters.

Reports serialize to a schema-versioned JSON document with a fixed field
order; ``report_from_json(report_to_json(r)) == r``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .coverage import (
    CoverageResult,
    DEFAULT_LCP_BINS,
    LcpBin,
    LcpResult,
    lcp_analysis,
    picp_diagnostic,
    validate_picp95,
)
from .dataio import Dataset
from .fitting import FitResult, fit_scaled_f
from .metrics import (
    DEFAULT_LEVEL,
    DEFAULT_N_BOOT,
    Verdict,
    VERDICT_ORDER,
    beta_gm,
    rce,
    validate_zms,
    ZmsResult,
)
from .seeding import substream

SCHEMA_VERSION = 1

# 1-sigma diagnostic target: normal coverage of a +/-1 interval
P_TARGET_1SIGMA = 0.6827
K_1SIGMA = 1.0


@dataclass(frozen=True)
class AnalysisConfig:
    seed: int = 0
    n_boot: int = DEFAULT_N_BOOT
    level: float = DEFAULT_LEVEL
    lcp_bins: int = DEFAULT_LCP_BINS
    with_lcp: bool = True
    with_fit: bool = True


@dataclass(frozen=True)
class Report:
    dataset_id: str
    m: int
    seed: int
    zms: ZmsResult
    rce: float
    beta_gm_z2: float
    beta_gm_ue2: float | None
    picp95: CoverageResult
    picp_1sigma: CoverageResult
    lcp: LcpResult | None
    fit: FitResult | None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION


def analyze(ds: Dataset, config: AnalysisConfig = AnalysisConfig()) -> Report:
    """Full analysis of one dataset; pure function of (data, config)."""
    z = ds.z
    z2 = z * z
    boot_seed = substream(config.seed, ds.id)
    zms_result = validate_zms(
        z, n_boot=config.n_boot, level=config.level, seed=boot_seed
    )
    u2 = ds.uE * ds.uE
    constant = np.all(z2 == z2[0])
    skew_z2 = 0.0 if constant else beta_gm(z2)
    skew_ue2 = None if np.all(u2 == u2[0]) else beta_gm(u2)

    picp95 = validate_picp95(z, level=config.level)
    picp67 = picp_diagnostic(z, P_TARGET_1SIGMA, K_1SIGMA, level=config.level)

    lcp = None
    if config.with_lcp and ds.m >= config.lcp_bins:
        lcp = lcp_analysis(ds.E, ds.uE, n_bins=config.lcp_bins, level=config.level)

    fit = None
    if config.with_fit and not np.all(z2 == 0.0):
        fit = fit_scaled_f(z2)

    return Report(
        dataset_id=ds.id,
        m=ds.m,
        seed=int(config.seed),
        zms=zms_result,
        rce=rce(ds.E, ds.uE),
        beta_gm_z2=float(skew_z2),
        beta_gm_ue2=None if skew_ue2 is None else float(skew_ue2),
        picp95=picp95,
        picp_1sigma=picp67,
        lcp=lcp,
        fit=fit,
    )


@dataclass(frozen=True)
class ContingencyTable:
    """PICP verdict (rows) x ZMS verdict (columns), order valid/invalid/untestable."""

    counts: tuple[tuple[int, int, int], ...]
    row_sums: tuple[int, int, int]
    col_sums: tuple[int, int, int]
    total: int

    labels = tuple(v.value for v in VERDICT_ORDER)

    def __str__(self) -> str:
        width = max(len(w) for w in self.labels) + 2
        head = " " * width + "".join(f"{w:>{width}}" for w in self.labels)
        lines = [head + f"{'sum':>{width}}"]
        for i, label in enumerate(self.labels):
            cells = "".join(f"{c:>{width}}" for c in self.counts[i])
            lines.append(f"{label:<{width}}" + cells + f"{self.row_sums[i]:>{width}}")
        foot = "".join(f"{c:>{width}}" for c in self.col_sums)
        lines.append(f"{'sum':<{width}}" + foot + f"{self.total:>{width}}")
        return "\n".join(lines)


def contingency(reports) -> ContingencyTable:
    """Cross-tabulate PICP (rows) against ZMS (columns) verdicts."""
    reports = list(reports)
    if not reports:
        raise ValueError("need at least one report")
    index = {v: i for i, v in enumerate(VERDICT_ORDER)}
    counts = [[0, 0, 0] for _ in range(3)]
    for rep in reports:
        counts[index[rep.picp95.verdict]][index[rep.zms.verdict]] += 1
    row_sums = tuple(sum(row) for row in counts)
    col_sums = tuple(sum(counts[i][j] for i in range(3)) for j in range(3))
    return ContingencyTable(
        counts=tuple(tuple(row) for row in counts),
        row_sums=row_sums,
        col_sums=col_sums,
        total=len(reports),
    )


# ---------------------------------------------------------------------------
# serialization


def _coverage_to_dict(c: CoverageResult) -> dict:
    return {
        "p_target": c.p_target,
        "k": c.k,
        "hits": c.hits,
        "m": c.m,
        "picp": c.picp,
        "ci_low": c.ci_low,
        "ci_high": c.ci_high,
        "level": c.level,
        "verdict": c.verdict.value,
        "beta_gm_z2": c.beta_gm_z2,
        "diagnostic": c.diagnostic,
    }


def _coverage_from_dict(d: dict) -> CoverageResult:
    return CoverageResult(
        p_target=d["p_target"],
        k=d["k"],
        hits=d["hits"],
        m=d["m"],
        picp=d["picp"],
        ci_low=d["ci_low"],
        ci_high=d["ci_high"],
        level=d["level"],
        verdict=Verdict(d["verdict"]),
        beta_gm_z2=d["beta_gm_z2"],
        diagnostic=d["diagnostic"],
    )


def report_to_dict(report: Report) -> dict:
    zms_d = {
        "zms": report.zms.zms,
        "ci_low": report.zms.ci_low,
        "ci_high": report.zms.ci_high,
        "n_boot": report.zms.n_boot,
        "level": report.zms.level,
        "verdict": report.zms.verdict.value,
        "beta_gm_z2": report.zms.beta_gm_z2,
        "degenerate": report.zms.degenerate,
    }
    lcp_d = None
    if report.lcp is not None:
        lcp_d = {
            "n_bins": report.lcp.n_bins,
            "overall": _coverage_to_dict(report.lcp.overall),
            "bins": [
                {
                    "index": b.index,
                    "uE_low": b.uE_low,
                    "uE_high": b.uE_high,
                    "coverage": _coverage_to_dict(b.coverage),
                }
                for b in report.lcp.bins
            ],
        }
    fit_d = None
    if report.fit is not None:
        fit_d = {
            "nu": report.fit.nu,
            "scale": report.fit.scale,
            "ks": report.fit.ks,
            "converged": report.fit.converged,
            "n_restarts_used": report.fit.n_restarts_used,
            "n": report.fit.n,
            "unit_mean": report.fit.unit_mean,
            "small_sample": report.fit.small_sample,
        }
    return {
        "schema_version": report.schema_version,
        "tool_version": report.tool_version,
        "dataset_id": report.dataset_id,
        "m": report.m,
        "seed": report.seed,
        "zms": zms_d,
        "rce": report.rce,
        "beta_gm_z2": report.beta_gm_z2,
        "beta_gm_ue2": report.beta_gm_ue2,
        "picp95": _coverage_to_dict(report.picp95),
        "picp_1sigma": _coverage_to_dict(report.picp_1sigma),
        "lcp": lcp_d,
        "fit": fit_d,
    }


def report_from_dict(d: dict) -> Report:
    zd = d["zms"]
    zms_result = ZmsResult(
        zms=zd["zms"],
        ci_low=zd["ci_low"],
        ci_high=zd["ci_high"],
        n_boot=zd["n_boot"],
        level=zd["level"],
        verdict=Verdict(zd["verdict"]),
        beta_gm_z2=zd["beta_gm_z2"],
        degenerate=zd["degenerate"],
    )
    lcp = None
    if d["lcp"] is not None:
        lcp = LcpResult(
            bins=tuple(
                LcpBin(
                    index=b["index"],
                    uE_low=b["uE_low"],
                    uE_high=b["uE_high"],
                    coverage=_coverage_from_dict(b["coverage"]),
                )
                for b in d["lcp"]["bins"]
            ),
            n_bins=d["lcp"]["n_bins"],
            overall=_coverage_from_dict(d["lcp"]["overall"]),
        )
    fit = None
    if d["fit"] is not None:
        fd = d["fit"]
        fit = FitResult(
            nu=fd["nu"],
            scale=fd["scale"],
            ks=fd["ks"],
            converged=fd["converged"],
            n_restarts_used=fd["n_restarts_used"],
            n=fd["n"],
            unit_mean=fd["unit_mean"],
            small_sample=fd["small_sample"],
        )
    return Report(
        dataset_id=d["dataset_id"],
        m=d["m"],
        seed=d["seed"],
        zms=zms_result,
        rce=d["rce"],
        beta_gm_z2=d["beta_gm_z2"],
        beta_gm_ue2=d["beta_gm_ue2"],
        picp95=_coverage_from_dict(d["picp95"]),
        picp_1sigma=_coverage_from_dict(d["picp_1sigma"]),
        lcp=lcp,
        fit=fit,
        tool_version=d["tool_version"],
        schema_version=d["schema_version"],
    )


def report_to_json(report: Report) -> str:
    """Byte-stable JSON: fixed field order, repr floats, trailing newline."""
    return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"


def report_from_json(text: str) -> Report:
    return report_from_dict(json.loads(text))


SUMMARY_COLUMNS = (
    "dataset_id",
    "m",
    "zms",
    "zms_ci_low",
    "zms_ci_high",
    "zms_verdict",
    "rce",
    "beta_gm_z2",
    "beta_gm_ue2",
    "picp95",
    "picp95_ci_low",
    "picp95_ci_high",
    "picp95_verdict",
    "fit_nu",
    "fit_ks",
)


def summary_csv(reports) -> str:
    """One-line-per-dataset CSV view of a report batch."""

    def fmt(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [",".join(SUMMARY_COLUMNS)]
    for r in reports:
        row = (
            r.dataset_id,
            r.m,
            r.zms.zms,
            r.zms.ci_low,
            r.zms.ci_high,
            r.zms.verdict.value,
            r.rce,
            r.beta_gm_z2,
            r.beta_gm_ue2,
            r.picp95.picp,
            r.picp95.ci_low,
            r.picp95.ci_high,
            r.picp95.verdict.value,
            None if r.fit is None else r.fit.nu,
            None if r.fit is None else r.fit.ks,
        )
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"
