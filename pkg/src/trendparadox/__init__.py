"""Detect Simpson's paradoxes in trends between pairs of variables."""

__version__ = "0.1.0"

from .binning import BinSpec, Subgroup, auto_bin_spec, disaggregate  # noqa: E402
from .dataset import (  # noqa: E402
    DataError,
    Dataset,
    SummaryStats,
    VariableSpec,
    column_stats,
    derive_ratio,
    load_csv,
)
from .detector import (  # noqa: E402
    PairEvaluation,
    ParadoxDiagnostics,
    ScanConfig,
    diagnostics,
    evaluate_pair,
    findings,
    mixture_identity_check,
    scan_pairs,
)
from .stats import (  # noqa: E402
    FitResult,
    MultiFitResult,
    chi_square_survival,
    fit_linear,
    fit_logistic,
    fit_logistic_multivariate,
    likelihood_ratio_test,
    trend_sign,
)

__all__ = [
    "BinSpec", "DataError", "Dataset", "FitResult", "MultiFitResult", "PairEvaluation",
    "ParadoxDiagnostics", "ScanConfig", "Subgroup", "SummaryStats", "VariableSpec",
    "auto_bin_spec", "chi_square_survival", "column_stats", "derive_ratio", "diagnostics",
    "disaggregate", "evaluate_pair", "findings", "fit_linear", "fit_logistic",
    "fit_logistic_multivariate", "likelihood_ratio_test", "load_csv",
    "mixture_identity_check", "scan_pairs", "trend_sign",
]
