"""Command-line interface.

Subcommands
-----------
validate   full analysis of one or more dataset CSVs (JSON/CSV reports)
lcp        local coverage analysis of one dataset
fit        scaled-F fit of squared z-scores
simulate   synthetic sweep over nu (reliability study)
compare    contingency table from a directory of JSON reports
plot       SVG figures (k95_curve, coverage_curve, picp_vs_skew,
           lcp_panel, fit_density)

With --strict the exit code encodes the binding 95% coverage verdict:
0 all valid, 3 any invalid, 4 any untestable (untestable outranks invalid,
so pipelines can tell "fix your tails" from "fix your calibration").
Load and usage errors exit 2.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .analysis import (
    AnalysisConfig,
    Report,
    analyze,
    contingency,
    report_from_json,
    report_to_json,
    summary_csv,
)
from .coverage import lcp_analysis
from .dataio import DatasetError, load_dataset
from .fitting import fit_scaled_f
from .metrics import Verdict, z_scores
from .plots import render_plot
from .simulation import default_grid, sweep

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_INVALID = 3
EXIT_UNTESTABLE = 4


def _strict_exit(verdicts) -> int:
    verdicts = list(verdicts)
    if any(v == Verdict.UNTESTABLE for v in verdicts):
        return EXIT_UNTESTABLE
    if any(v == Verdict.INVALID for v in verdicts):
        return EXIT_INVALID
    return EXIT_OK


def _config(args) -> AnalysisConfig:
    return AnalysisConfig(
        seed=args.seed,
        n_boot=args.boot,
        level=args.level,
        lcp_bins=args.bins,
    )


def _add_common(parser, bins_default=20):
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--boot", type=int, default=5000, help="bootstrap replicates")
    parser.add_argument("--level", type=float, default=0.95, help="CI level")
    parser.add_argument("--bins", type=int, default=bins_default, help="LCP bins")
    parser.add_argument(
        "--strict",
        action="store_true",
        help="exit 3 on any invalid verdict, 4 on any untestable",
    )
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", dest="fmt"
    )


def cmd_validate(args) -> int:
    config = _config(args)
    reports: list[Report] = []
    for path in args.files:
        ds = load_dataset(path)
        reports.append(analyze(ds, config))
    if args.out is not None:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for rep in reports:
            (outdir / f"{rep.dataset_id}.json").write_text(report_to_json(rep))
    if args.fmt == "csv":
        sys.stdout.write(summary_csv(reports))
    elif len(reports) == 1:
        sys.stdout.write(report_to_json(reports[0]))
    else:
        docs = ",\n".join(report_to_json(r).rstrip("\n") for r in reports)
        sys.stdout.write(f"[\n{docs}\n]\n")
    if args.strict:
        return _strict_exit(r.picp95.verdict for r in reports)
    return EXIT_OK


def cmd_lcp(args) -> int:
    ds = load_dataset(args.file)
    result = lcp_analysis(ds.E, ds.uE, n_bins=args.bins, level=args.level)
    if args.fmt == "csv":
        lines = ["bin,uE_low,uE_high,m,hits,picp,ci_low,ci_high,verdict"]
        for b in result.bins:
            c = b.coverage
            lines.append(
                f"{b.index},{b.uE_low!r},{b.uE_high!r},{c.m},{c.hits},"
                f"{c.picp!r},{c.ci_low!r},{c.ci_high!r},{c.verdict.value}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        import json

        from .analysis import _coverage_to_dict

        doc = {
            "n_bins": result.n_bins,
            "overall": _coverage_to_dict(result.overall),
            "bins": [
                {
                    "index": b.index,
                    "uE_low": b.uE_low,
                    "uE_high": b.uE_high,
                    "coverage": _coverage_to_dict(b.coverage),
                }
                for b in result.bins
            ],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    if args.strict:
        return _strict_exit([result.overall.verdict])
    return EXIT_OK


def cmd_fit(args) -> int:
    ds = load_dataset(args.file)
    z = z_scores(ds.E, ds.uE)
    fit = fit_scaled_f(z * z, unit_mean=args.unit_mean)
    if args.fmt == "csv":
        sys.stdout.write("nu,scale,ks,converged,n\n")
        sys.stdout.write(
            f"{fit.nu!r},{fit.scale!r},{fit.ks!r},{fit.converged},{fit.n}\n"
        )
    else:
        import json

        sys.stdout.write(
            json.dumps(
                {
                    "nu": fit.nu,
                    "scale": fit.scale,
                    "ks": fit.ks,
                    "converged": fit.converged,
                    "n_restarts_used": fit.n_restarts_used,
                    "n": fit.n,
                    "unit_mean": fit.unit_mean,
                    "small_sample": fit.small_sample,
                },
                indent=2,
            )
            + "\n"
        )
    return EXIT_OK


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        return default_grid(int(n), float(lo), float(hi))
    except ValueError:
        raise SystemExit(f"bad --grid {spec!r}; expected LO:HI:N") from None


def cmd_simulate(args) -> int:
    grid = _parse_grid(args.grid) if args.grid else None
    points = sweep(nu_grid=grid, m=args.m, seed=args.seed)
    if args.plot is not None:
        Path(args.plot).write_text(render_plot(points, "picp_vs_skew"))
    if args.fmt == "csv":
        lines = ["nu,beta_gm_z2,picp,ci_low,ci_high,verdict,theoretical"]
        for p in points:
            c = p.coverage
            lines.append(
                f"{p.nu!r},{p.beta_gm_z2!r},{c.picp!r},{c.ci_low!r},"
                f"{c.ci_high!r},{c.verdict.value},{p.theoretical!r}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        import json

        doc = [
            {
                "nu": p.nu,
                "beta_gm_z2": p.beta_gm_z2,
                "picp": p.coverage.picp,
                "ci_low": p.coverage.ci_low,
                "ci_high": p.coverage.ci_high,
                "verdict": p.coverage.verdict.value,
                "theoretical": p.theoretical,
            }
            for p in points
        ]
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    paths = sorted(Path(args.report_dir).glob("*.json"))
    if not paths:
        raise SystemExit(f"no .json reports under {args.report_dir}")
    reports = [report_from_json(p.read_text()) for p in paths]
    table = contingency(reports)
    if args.fmt == "csv":
        lines = ["picp\\zms," + ",".join(table.labels) + ",sum"]
        for i, label in enumerate(table.labels):
            row = ",".join(str(c) for c in table.counts[i])
            lines.append(f"{label},{row},{table.row_sums[i]}")
        lines.append("sum," + ",".join(str(c) for c in table.col_sums) + f",{table.total}")
        sys.stdout.write("\n".join(lines) + "\n")
    elif args.fmt == "json":
        import json

        sys.stdout.write(
            json.dumps(
                {
                    "labels": list(table.labels),
                    "counts": [list(r) for r in table.counts],
                    "row_sums": list(table.row_sums),
                    "col_sums": list(table.col_sums),
                    "total": table.total,
                },
                indent=2,
            )
            + "\n"
        )
    return EXIT_OK


def cmd_plot(args) -> int:
    kind = args.kind
    if kind in ("k95_curve", "coverage_curve"):
        svg = render_plot(None, kind)
    elif kind == "lcp_panel":
        if len(args.inputs) != 1:
            raise SystemExit("lcp_panel needs exactly one dataset CSV")
        ds = load_dataset(args.inputs[0])
        result = lcp_analysis(ds.E, ds.uE, n_bins=args.bins, level=args.level)
        svg = render_plot(result, kind)
    elif kind == "fit_density":
        if len(args.inputs) != 1:
            raise SystemExit("fit_density needs exactly one dataset CSV")
        ds = load_dataset(args.inputs[0])
        z = z_scores(ds.E, ds.uE)
        fit = fit_scaled_f(z * z)
        svg = render_plot((z * z, fit), kind)
    elif kind == "picp_vs_skew":
        if not args.inputs:
            raise SystemExit("picp_vs_skew needs a report directory or dataset CSVs")
        first = Path(args.inputs[0])
        if first.is_dir():
            reports = [
                report_from_json(p.read_text()) for p in sorted(first.glob("*.json"))
            ]
        else:
            config = AnalysisConfig(
                seed=args.seed, n_boot=args.boot, level=args.level, lcp_bins=args.bins
            )
            reports = [analyze(load_dataset(p), config) for p in args.inputs]
        svg = render_plot(reports, kind)
    else:  # argparse choices make this unreachable
        raise SystemExit(f"unknown kind {kind}")
    if args.out is None:
        sys.stdout.write(svg)
    else:
        Path(args.out).write_text(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picpkit",
        description="Validate regression uncertainty calibration with the "
        "interval-based PICP test (plus ZMS/RCE diagnostics).",
    )
    parser.add_argument("--version", action="version", version=f"picpkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="analyze dataset CSVs and emit reports")
    p.add_argument("files", nargs="+", help="dataset CSV files")
    p.add_argument("--out", help="directory for per-dataset JSON reports")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lcp", help="local coverage analysis of one dataset")
    p.add_argument("file", help="dataset CSV")
    _add_common(p)
    p.set_defaults(func=cmd_lcp)

    p = sub.add_parser("fit", help="fit a scaled F(1, nu) to squared z-scores")
    p.add_argument("file", help="dataset CSV")
    p.add_argument(
        "--unit-mean",
        action="store_true",
        help="constrain the fit to mean 1 (scale = (nu-2)/nu)",
    )
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="PICP sweep over a nu grid")
    p.add_argument("--m", type=int, default=10000, help="sample size per grid point")
    p.add_argument("--grid", help="nu grid as LO:HI:N (log-spaced), default 2.1:100:40")
    p.add_argument("--plot", help="also write the sweep figure to this SVG path")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="contingency table from JSON reports")
    p.add_argument("report_dir", help="directory containing *.json reports")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render an SVG figure")
    p.add_argument(
        "--kind",
        required=True,
        choices=(
            "k95_curve",
            "coverage_curve",
            "picp_vs_skew",
            "lcp_panel",
            "fit_density",
        ),
    )
    p.add_argument("inputs", nargs="*", help="dataset CSVs or a report directory")
    p.add_argument("--out", "-o", help="output SVG path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, ValueError) as exc:
        print(f"picpkit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
