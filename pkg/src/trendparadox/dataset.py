"""Immutable columnar tables of numeric variables with one outcome column."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

OUTCOME_KINDS = ("binary_outcome", "continuous_outcome")
VARIABLE_KINDS = OUTCOME_KINDS + ("continuous", "integer", "categorical")


class DataError(ValueError):
    """Raised when input data violates a dataset invariant."""


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str = "continuous"

    def __post_init__(self):
        if self.kind not in VARIABLE_KINDS:
            raise ValueError(f"unknown variable kind {self.kind!r} for column {self.name!r}")

    @property
    def is_outcome(self) -> bool:
        return self.kind in OUTCOME_KINDS


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    variance: float
    min: float
    max: float
    distinct_count: int


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """A read-only table of float64 columns.

    Columns are stored as non-writeable numpy arrays, so views handed out to
    fitting code cannot mutate the table. ``metadata`` carries provenance such
    as dropped-row counts or the generator RNG.
    """

    columns: Mapping[str, np.ndarray]
    outcome_name: str
    binary_outcome: bool = True
    kinds: Mapping[str, str] = field(default_factory=dict)
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        cols = {name: _freeze(values) for name, values in self.columns.items()}
        if self.outcome_name not in cols:
            raise DataError(f"outcome column {self.outcome_name!r} missing")
        lengths = {len(v) for v in cols.values()}
        if len(lengths) != 1:
            raise DataError(f"columns have unequal lengths: {sorted(lengths)}")
        n = lengths.pop()
        if n < 1:
            raise DataError("dataset has zero rows")
        for name, values in cols.items():
            if not np.all(np.isfinite(values)):
                raise DataError(f"column {name!r} contains non-finite values")
        if self.binary_outcome:
            y = cols[self.outcome_name]
            bad = ~((y == 0.0) | (y == 1.0))
            if bad.any():
                raise DataError(
                    f"binary outcome {self.outcome_name!r} contains value "
                    f"{y[bad][0]!r} outside {{0, 1}}"
                )
        kinds = dict(self.kinds)
        for name in cols:
            kinds.setdefault(
                name,
                ("binary_outcome" if self.binary_outcome else "continuous_outcome")
                if name == self.outcome_name else "continuous",
            )
        object.__setattr__(self, "columns", MappingProxyType(cols))
        object.__setattr__(self, "kinds", MappingProxyType(kinds))
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    @property
    def n_rows(self) -> int:
        return len(self.columns[self.outcome_name])

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    @property
    def variables(self) -> list[str]:
        """Non-outcome column names, in table order."""
        return [n for n in self.columns if n != self.outcome_name]

    @property
    def outcome(self) -> np.ndarray:
        return self.columns[self.outcome_name]

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise KeyError(f"unknown column {name!r}") from None

    def take(self, rows) -> "Dataset":
        """Materialize a new dataset from a subset of rows, order preserved."""
        rows = np.asarray(rows)
        return Dataset(
            {k: v[rows] for k, v in self.columns.items()},
            self.outcome_name,
            self.binary_outcome,
            self.kinds,
            self.metadata,
        )

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_csv(fh, self)


def _format_value(v: float) -> str:
    if float(v).is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(float(v))


def write_csv(fh, d: Dataset) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(d.names)
    cols = [d.columns[n] for n in d.names]
    for i in range(d.n_rows):
        writer.writerow([_format_value(c[i]) for c in cols])


def _parse(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return math.nan


def load_csv(path, schema: Sequence[VariableSpec]) -> Dataset:
    """Load the declared columns of a CSV file.

    Rows with an unparsable or non-finite value in any declared column are
    dropped; the count is stored in ``metadata["dropped_rows"]``. Undeclared
    columns are ignored.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    outcomes = [s for s in schema if s.is_outcome]
    if len(outcomes) != 1:
        raise DataError(f"schema must declare exactly one outcome, got {len(outcomes)}")
    outcome = outcomes[0]

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        index = {}
        for spec in schema:
            if spec.name not in header:
                raise DataError(f"column {spec.name!r} not found in {path}")
            index[spec.name] = header.index(spec.name)
        raw = {spec.name: [] for spec in schema}
        for row in reader:
            if not row:
                continue
            for spec in schema:
                j = index[spec.name]
                raw[spec.name].append(_parse(row[j]) if j < len(row) else math.nan)

    cols = {name: np.asarray(vals, dtype=np.float64) for name, vals in raw.items()}
    n_total = len(cols[outcome.name])
    keep = np.ones(n_total, dtype=bool)
    for values in cols.values():
        keep &= np.isfinite(values)
    dropped = int(n_total - keep.sum())
    if not keep.any():
        raise DataError(f"{path}: zero rows left after dropping {dropped} incomplete rows")
    return Dataset(
        {name: values[keep] for name, values in cols.items()},
        outcome.name,
        binary_outcome=outcome.kind == "binary_outcome",
        kinds={s.name: s.kind for s in schema},
        metadata={"dropped_rows": dropped, "source": str(path)},
    )


def derive_ratio(d: Dataset, numerator: str, denominator: str, new_name: str) -> Dataset:
    """Add ``numerator / denominator`` as a new column, e.g. reputation per answer.

    Rows with a zero denominator are dropped and counted in
    ``metadata["dropped_zero_denominator"]``.
    """
    for name in (numerator, denominator):
        if name not in d.columns:
            raise DataError(f"unknown column {name!r}")
        if name == d.outcome_name:
            raise DataError(f"cannot derive a feature from the outcome {name!r}")
    if new_name in d.columns:
        raise DataError(f"column {new_name!r} already exists")
    den = d[denominator]
    keep = den != 0
    if not keep.any():
        raise DataError(f"denominator {denominator!r} is zero in every row")
    cols = {k: v[keep] for k, v in d.columns.items()}
    cols[new_name] = d[numerator][keep] / den[keep]
    kinds = dict(d.kinds)
    kinds[new_name] = "continuous"
    meta = dict(d.metadata)
    meta["dropped_zero_denominator"] = int((~keep).sum())
    return Dataset(cols, d.outcome_name, d.binary_outcome, kinds, meta)


def column_stats(d: Dataset, name: str) -> SummaryStats:
    x = d[name]
    mean = float(np.mean(x))
    variance = float(np.sum((x - mean) ** 2) / (len(x) - 1)) if len(x) > 1 else 0.0
    return SummaryStats(
        mean=min(max(mean, float(x.min())), float(x.max())),
        variance=variance,
        min=float(x.min()),
        max=float(x.max()),
        distinct_count=int(len(np.unique(x))),
    )


def from_arrays(columns: Mapping[str, Iterable[float]], outcome: str, binary: bool = True,
                **metadata) -> Dataset:
    return Dataset({k: np.asarray(v, dtype=np.float64) for k, v in columns.items()},
                   outcome, binary_outcome=binary, metadata=metadata)
