"""Disaggregation of rows into subgroups by the value or bin of one variable."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import DataError, Dataset

STRATEGIES = ("distinct_values", "equal_width", "equal_frequency", "log_width")
DEFAULT_MIN_BIN_ROWS = 100
MAX_DISTINCT_FOR_VALUES = 20
HEAVY_TAIL_RATIO = 1000.0


@dataclass(frozen=True)
class BinSpec:
    strategy: str = "equal_frequency"
    bin_count: int = 10
    min_bin_rows: int = DEFAULT_MIN_BIN_ROWS

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown binning strategy {self.strategy!r}")
        if self.strategy != "distinct_values" and self.bin_count < 2:
            raise ValueError(f"bin_count must be >= 2 for {self.strategy}, got {self.bin_count}")
        if self.min_bin_rows < 1:
            raise ValueError("min_bin_rows must be positive")

    @classmethod
    def parse(cls, text: str, min_bin_rows: int = DEFAULT_MIN_BIN_ROWS) -> "BinSpec":
        """Parse ``STRATEGY[:K]``, e.g. ``equal_width:5`` or ``distinct_values``."""
        strategy, _, count = text.partition(":")
        strategy = strategy.strip().replace("-", "_")
        return cls(strategy, int(count) if count else 10, min_bin_rows)

    def __str__(self):
        if self.strategy == "distinct_values":
            return self.strategy
        return f"{self.strategy}:{self.bin_count}"


@dataclass(frozen=True)
class Subgroup:
    label: str
    row_indices: np.ndarray
    lo: float
    hi: float
    closed_right: bool
    valid: bool

    @property
    def n(self) -> int:
        return len(self.row_indices)

    def contains(self, value: float) -> bool:
        if value < self.lo:
            return False
        return value <= self.hi if self.closed_right else value < self.hi


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.6g}"


def _interval_groups(values, edges, min_rows):
    # bins are [e_i, e_{i+1}) except the last, which is closed
    idx = np.searchsorted(edges[1:-1], values, side="right")
    groups = []
    last = len(edges) - 2
    for b in range(len(edges) - 1):
        rows = np.flatnonzero(idx == b)
        lo, hi = edges[b], edges[b + 1]
        closer = "]" if b == last else ")"
        groups.append(Subgroup(
            f"[{_fmt(lo)}, {_fmt(hi)}{closer}", rows, float(lo), float(hi),
            b == last, len(rows) >= min_rows,
        ))
    return groups


def _quantile_edges(values: np.ndarray, k: int) -> np.ndarray:
    edges = np.quantile(values, np.linspace(0.0, 1.0, k + 1))
    edges[0], edges[-1] = values.min(), values.max()
    return np.unique(edges)


def disaggregate(d: Dataset, var: str, spec: BinSpec) -> list[Subgroup]:
    """Partition the rows of ``d`` into subgroups of ``var``.

    Subgroups smaller than ``spec.min_bin_rows`` are returned with
    ``valid=False`` rather than dropped. Empty interval bins are omitted.
    """
    if var not in d.columns:
        raise DataError(f"unknown variable {var!r}")
    if var == d.outcome_name:
        raise DataError(f"cannot condition on the outcome {var!r}")
    values = d[var]
    min_rows = spec.min_bin_rows

    if spec.strategy == "distinct_values":
        uniq, inverse = np.unique(values, return_inverse=True)
        order = np.argsort(inverse, kind="stable")
        splits = np.split(order, np.cumsum(np.bincount(inverse))[:-1])
        return [Subgroup(_fmt(u), rows, float(u), float(u), True, len(rows) >= min_rows)
                for u, rows in zip(uniq, splits)]

    if spec.strategy == "log_width" and np.any(values <= 0):
        raise DataError(f"log_width binning needs strictly positive values in {var!r}")

    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        edges = np.array([lo, hi])
    elif spec.strategy == "equal_frequency":
        edges = _quantile_edges(values, spec.bin_count)
    elif spec.strategy == "log_width":
        # equal width in log10, mapped back so membership is decided on raw values
        edges = 10.0 ** np.linspace(np.log10(lo), np.log10(hi), spec.bin_count + 1)
        edges[0], edges[-1] = lo, hi
        edges = np.unique(edges)
    else:
        edges = np.linspace(lo, hi, spec.bin_count + 1)
    groups = _interval_groups(values, edges, min_rows)
    return [g for g in groups if g.n > 0]


def auto_bin_spec(d: Dataset, var: str) -> BinSpec:
    values = d[var]
    n_distinct = len(np.unique(values))
    if n_distinct <= MAX_DISTINCT_FOR_VALUES:
        return BinSpec("distinct_values", 10, DEFAULT_MIN_BIN_ROWS)
    lo, hi = float(values.min()), float(values.max())
    if lo > 0 and hi / lo > HEAVY_TAIL_RATIO:
        return BinSpec("log_width", 10, DEFAULT_MIN_BIN_ROWS)
    return BinSpec("equal_frequency", 10, DEFAULT_MIN_BIN_ROWS)
