"""Trend Simpson's paradox detection over ordered variable pairs.

For an ordered pair ``(x_p, x_c)`` the outcome is regressed on ``x_p`` over
all rows (the aggregate trend) and again inside every subgroup of ``x_c``.
The pair is a Simpson's pair when the sign of the aggregate trend differs
from the sign of the unweighted mean of the subgroup trend signs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from . import stats
from .binning import BinSpec, Subgroup, auto_bin_spec, disaggregate
from .dataset import DataError, Dataset

SIGN_EPS = 1e-12
JOBS_ENV = "TRENDPARADOX_JOBS"


@dataclass(frozen=True)
class ScanConfig:
    threshold: float = stats.DEFAULT_THRESHOLD
    bin_overrides: Mapping[str, BinSpec] = field(default_factory=dict)
    default_bins: Optional[BinSpec] = None
    min_bin_rows: Optional[int] = None
    min_valid_bins: int = 2
    model: str = "logistic"

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.model not in ("logistic", "linear"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.min_valid_bins < 1:
            raise ValueError("min_valid_bins must be positive")
        if self.min_bin_rows is not None and self.min_bin_rows < 1:
            raise ValueError("min_bin_rows must be positive")

    def bin_spec(self, d: Dataset, var: str) -> BinSpec:
        spec = self.bin_overrides.get(var) or self.default_bins or auto_bin_spec(d, var)
        if self.min_bin_rows is not None:
            spec = BinSpec(spec.strategy, spec.bin_count, self.min_bin_rows)
        return spec

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "model": self.model,
            "min_valid_bins": self.min_valid_bins,
            "min_bin_rows": self.min_bin_rows,
            "default_bins": str(self.default_bins) if self.default_bins else None,
            "bin_overrides": {k: str(v) for k, v in sorted(self.bin_overrides.items())},
        }


@dataclass(frozen=True)
class BinResult:
    label: str
    n: int
    fit: Optional[stats.FitResult]
    sign: Optional[int]
    skip_reason: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.sign is not None


@dataclass(frozen=True)
class ParadoxDiagnostics:
    dependence_pc: float
    between_bin_outcome_spread: float
    condition1_met: bool
    condition2_met: bool


@dataclass(frozen=True)
class PairEvaluation:
    x_p: str
    x_c: str
    aggregate_fit: Optional[stats.FitResult]
    aggregate_sign: int
    bin_results: tuple
    mean_disagg_sign: float
    disagg_sign: int
    is_paradox: bool
    classification: str
    valid_bins: int
    skipped_bins: int
    bin_spec: str = ""
    diagnostics: Optional[ParadoxDiagnostics] = None
    error: Optional[str] = None

    @property
    def pair_id(self) -> str:
        return f"{self.x_p}|{self.x_c}"

    @property
    def strength(self) -> float:
        return abs(self.mean_disagg_sign - self.aggregate_sign)


def sign_of_mean(mean: float) -> int:
    if abs(mean) < SIGN_EPS:
        return 0
    return 1 if mean > 0 else -1


def classify(aggregate_sign: int, disagg_sign: int) -> str:
    if aggregate_sign * disagg_sign == -1:
        return "reversal"
    if aggregate_sign != 0 and disagg_sign == 0:
        return "disappearance"
    if aggregate_sign == 0 and disagg_sign != 0:
        return "emergence"
    return "none"


def paradox_flag(aggregate_sign: int, bin_signs, min_valid_bins: int = 2):
    """Return ``(mean_sign, disagg_sign, is_paradox)`` from the valid bin signs."""
    bin_signs = list(bin_signs)
    mean = float(np.mean(bin_signs)) if bin_signs else 0.0
    disagg = sign_of_mean(mean)
    return mean, disagg, (aggregate_sign != disagg and len(bin_signs) >= min_valid_bins)


def _check_pair(d: Dataset, x_p: str, x_c: str) -> None:
    if x_p == x_c:
        raise DataError(f"identical variables: {x_p!r}")
    for name in (x_p, x_c):
        if name not in d.columns:
            raise DataError(f"unknown variable {name!r}")
        if name == d.outcome_name:
            raise DataError(f"{name!r} is the outcome")


def _fit_bins(d: Dataset, x_p: str, groups: list[Subgroup], cfg: ScanConfig) -> list[BinResult]:
    x, y = d[x_p], d.outcome
    results = []
    for g in groups:
        if not g.valid:
            results.append(BinResult(g.label, g.n, None, None, "too_few_rows"))
            continue
        fit = stats.fit_trend(x[g.row_indices], y[g.row_indices], cfg.model)
        if fit.status == stats.DEGENERATE:
            results.append(BinResult(g.label, g.n, fit, None, "degenerate"))
        else:
            results.append(BinResult(g.label, g.n, fit, stats.trend_sign(fit, cfg.threshold)))
    return results


def _spread(y: np.ndarray, groups: list[Subgroup]) -> float:
    means = [float(np.mean(y[g.row_indices])) for g in groups if g.valid]
    return float(np.var(means)) if len(means) > 1 else 0.0


def diagnostics(d: Dataset, x_p: str, x_c: str, cfg: Optional[ScanConfig] = None,
                groups: Optional[list[Subgroup]] = None) -> ParadoxDiagnostics:
    """Measures behind the two necessary conditions for a paradox.

    A paradox needs ``x_p`` and ``x_c`` to be dependent and the outcome mean to
    vary across ``x_c`` subgroups. Dependence is the Pearson correlation;
    variation is the population variance of per-bin outcome means over valid bins.
    """
    _check_pair(d, x_p, x_c)
    cfg = cfg or ScanConfig()
    a, b = d[x_p], d[x_c]
    if np.all(a == a[0]) or np.all(b == b[0]):
        r = 0.0
    else:
        r = float(np.clip(np.corrcoef(a, b)[0, 1], -1.0, 1.0))
    if groups is None:
        groups = disaggregate(d, x_c, cfg.bin_spec(d, x_c))
    spread = _spread(d.outcome, groups)
    return ParadoxDiagnostics(r, spread, abs(r) > 0.01, spread > 1e-12)


def evaluate_pair(d: Dataset, x_p: str, x_c: str, cfg: Optional[ScanConfig] = None,
                  aggregate_fit: Optional[stats.FitResult] = None) -> PairEvaluation:
    cfg = cfg or ScanConfig()
    _check_pair(d, x_p, x_c)
    if aggregate_fit is None:
        aggregate_fit = stats.fit_trend(d[x_p], d.outcome, cfg.model)
    agg_sign = stats.trend_sign(aggregate_fit, cfg.threshold)
    spec = cfg.bin_spec(d, x_c)
    groups = disaggregate(d, x_c, spec)
    bins = _fit_bins(d, x_p, groups, cfg)
    signs = [b.sign for b in bins if b.valid]
    mean, disagg, flag = paradox_flag(agg_sign, signs, cfg.min_valid_bins)
    return PairEvaluation(
        x_p=x_p,
        x_c=x_c,
        aggregate_fit=aggregate_fit,
        aggregate_sign=agg_sign,
        bin_results=tuple(bins),
        mean_disagg_sign=mean,
        disagg_sign=disagg,
        is_paradox=flag,
        classification=classify(agg_sign, disagg),
        valid_bins=len(signs),
        skipped_bins=len(bins) - len(signs),
        bin_spec=str(spec),
        diagnostics=diagnostics(d, x_p, x_c, cfg, groups),
    )


def _failed(x_p: str, x_c: str, exc: Exception) -> PairEvaluation:
    return PairEvaluation(x_p, x_c, None, 0, (), 0.0, 0, False, "none", 0, 0, error=str(exc))


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def sort_key(ev: PairEvaluation):
    return (not ev.is_paradox, ev.x_p, ev.x_c)


def scan_pairs(d: Dataset, cfg: Optional[ScanConfig] = None, variables=None,
               jobs: Optional[int] = None) -> list[PairEvaluation]:
    """Evaluate every ordered pair of distinct variables.

    ``m`` variables give ``m * (m - 1)`` evaluations, sorted paradoxes first and
    then by name. A failing pair is recorded with ``error`` set instead of
    aborting the scan.
    """
    cfg = cfg or ScanConfig()
    variables = list(variables) if variables is not None else d.variables
    if len(variables) < 2:
        raise DataError("need at least two non-outcome variables to scan")
    for v in variables:
        if v not in d.columns or v == d.outcome_name:
            raise DataError(f"unknown variable {v!r}")
    jobs = jobs or default_jobs()

    def aggregate(v):
        return stats.fit_trend(d[v], d.outcome, cfg.model)

    def one(pair):
        x_p, x_c = pair
        try:
            return evaluate_pair(d, x_p, x_c, cfg, aggregates[x_p])
        except (ValueError, np.linalg.LinAlgError) as exc:
            return _failed(x_p, x_c, exc)

    pairs = [(p, c) for p in variables for c in variables if p != c]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            aggregates = dict(zip(variables, pool.map(aggregate, variables)))
            results = list(pool.map(one, pairs))
    else:
        aggregates = {v: aggregate(v) for v in variables}
        results = [one(p) for p in pairs]
    return sorted(results, key=sort_key)


def findings(evaluations) -> list[PairEvaluation]:
    """Flagged pairs, strongest contradiction first."""
    return sorted((e for e in evaluations if e.is_paradox),
                  key=lambda e: (-e.strength, e.x_p, e.x_c))


def mixture_identity_check(d: Dataset, x_p: str, x_c: str, max_distinct: int = 1000) -> float:
    """Largest gap between ``E[Y|x_p]`` and ``sum_c E[Y|x_p, c] P(c|x_p)``.

    Both sides use empirical frequencies with every distinct value of ``x_c``
    as its own cell, so the two agree up to floating-point round-off.
    """
    _check_pair(d, x_p, x_c)
    xp_vals, xp_idx = np.unique(d[x_p], return_inverse=True)
    if len(xp_vals) > max_distinct:
        raise DataError(f"{x_p!r} has {len(xp_vals)} distinct values (limit {max_distinct})")
    _, xc_idx = np.unique(d[x_c], return_inverse=True)
    y = d.outcome
    k = len(xp_vals)

    count_x = np.bincount(xp_idx, minlength=k).astype(np.float64)
    lhs = np.bincount(xp_idx, weights=y, minlength=k) / count_x

    cell = xp_idx.astype(np.int64) * (int(xc_idx.max()) + 1) + xc_idx
    cells, cell_idx = np.unique(cell, return_inverse=True)
    cell_n = np.bincount(cell_idx).astype(np.float64)
    cell_mean = np.bincount(cell_idx, weights=y) / cell_n
    cell_x = cells // (int(xc_idx.max()) + 1)
    cell_prob = cell_n / count_x[cell_x]
    rhs = np.bincount(cell_x, weights=cell_mean * cell_prob, minlength=k)
    return float(np.max(np.abs(lhs - rhs)))
