"""picpkit: validation of ML regression uncertainty calibration.

Average calibration is tested through the prediction interval coverage
probability (PICP) of fixed +/-1.96 z-score intervals, with
continuity-corrected Wilson confidence intervals and a robust-skewness
testability gate; variance-based statistics (ZMS with bootstrap testing,
RCE) and distribution-shape tooling (scaled Fisher-Snedecor fits of Z^2,
a synthetic reliability sweep) complete the picture.

The numerical core (incomplete beta, t CDF/quantile, KS objective) is a
compiled extension with a NumPy fallback; see ``picpkit.kernels``.
"""

from ._version import __version__
from .analysis import (
    AnalysisConfig,
    ContingencyTable,
    Report,
    analyze,
    contingency,
    report_from_json,
    report_to_json,
    summary_csv,
)
from .coverage import (
    CoverageResult,
    LcpBin,
    LcpResult,
    bin_by_uncertainty,
    coverage_of_interval,
    k_factor,
    lcp_analysis,
    picp,
    picp_diagnostic,
    validate_picp95,
    wilson_ci,
)
from .dataio import Dataset, DatasetError, load_dataset, load_datasets
from .distributions import (
    ScaledF,
    fs_cdf,
    fs_pdf,
    reg_inc_beta,
    sample_ts,
    t_cdf,
    t_pdf,
    t_quantile,
    ts_cdf,
    ts_quantile,
)
from .fitting import FitResult, fit_scaled_f, ks_critical_value, ks_distance, nelder_mead
from .metrics import (
    Verdict,
    ZmsResult,
    beta_gm,
    bootstrap_ci_zms,
    rce,
    validate_zms,
    z_scores,
    zms,
)
from .plots import render_plot
from .seeding import rng_for, substream
from .simulation import SimPoint, default_grid, sweep

__all__ = [
    "__version__",
    "AnalysisConfig",
    "ContingencyTable",
    "CoverageResult",
    "Dataset",
    "DatasetError",
    "FitResult",
    "LcpBin",
    "LcpResult",
    "Report",
    "ScaledF",
    "SimPoint",
    "Verdict",
    "ZmsResult",
    "analyze",
    "beta_gm",
    "bin_by_uncertainty",
    "bootstrap_ci_zms",
    "contingency",
    "coverage_of_interval",
    "default_grid",
    "fit_scaled_f",
    "fs_cdf",
    "fs_pdf",
    "k_factor",
    "ks_critical_value",
    "ks_distance",
    "lcp_analysis",
    "load_dataset",
    "load_datasets",
    "nelder_mead",
    "picp",
    "picp_diagnostic",
    "reg_inc_beta",
    "render_plot",
    "report_from_json",
    "report_to_json",
    "rng_for",
    "sample_ts",
    "substream",
    "summary_csv",
    "sweep",
    "t_cdf",
    "t_pdf",
    "t_quantile",
    "ts_cdf",
    "ts_quantile",
    "validate_picp95",
    "validate_zms",
    "wilson_ci",
    "z_scores",
    "zms",
]
