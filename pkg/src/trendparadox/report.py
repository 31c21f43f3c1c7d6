"""Scan reports (JSON or flat CSV) and plot-ready curve data."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, stats
from .binning import disaggregate
from .dataset import Dataset
from .detector import PairEvaluation, ScanConfig, findings

GRID_POINTS = 50
MAX_DISTINCT_EMPIRICAL = 20
PLOT_COLUMNS = ["pair_id", "x_p", "x_c", "curve_type", "bin_label", "x", "fitted", "empirical", "n"]
CSV_COLUMNS = [
    "x_p", "x_c", "aggregate_alpha", "aggregate_beta", "aggregate_p_value", "aggregate_status",
    "aggregate_sign", "mean_disagg_sign", "disagg_sign", "is_paradox", "classification",
    "valid_bins", "skipped_bins", "bin_spec", "dependence_pc", "between_bin_outcome_spread",
    "error",
]


def file_hash(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def dataset_hash(d: Dataset) -> str:
    h = hashlib.sha256()
    for name in d.names:
        h.update(name.encode("utf-8"))
        h.update(np.ascontiguousarray(d[name]).tobytes())
    return h.hexdigest()


def fingerprint(d: Dataset, path=None) -> dict:
    return {
        "n_rows": d.n_rows,
        "columns": d.names,
        "outcome": d.outcome_name,
        "content_hash": file_hash(path) if path is not None else dataset_hash(d),
        "dropped_rows": int(d.metadata.get("dropped_rows", 0)),
    }


def evaluation_to_dict(ev: PairEvaluation) -> dict:
    return {
        "pair_id": ev.pair_id,
        "x_p": ev.x_p,
        "x_c": ev.x_c,
        "aggregate_fit": ev.aggregate_fit.to_dict() if ev.aggregate_fit else None,
        "aggregate_sign": ev.aggregate_sign,
        "bins": [
            {
                "label": b.label,
                "n": b.n,
                "fit": b.fit.to_dict() if b.fit else None,
                "sign": b.sign,
                "skip_reason": b.skip_reason,
            }
            for b in ev.bin_results
        ],
        "mean_disagg_sign": ev.mean_disagg_sign,
        "disagg_sign": ev.disagg_sign,
        "is_paradox": ev.is_paradox,
        "classification": ev.classification,
        "valid_bins": ev.valid_bins,
        "skipped_bins": ev.skipped_bins,
        "bin_spec": ev.bin_spec,
        "diagnostics": asdict(ev.diagnostics) if ev.diagnostics else None,
        "error": ev.error,
    }


def build_report(d: Dataset, evaluations, cfg: ScanConfig, path=None,
                 timing: Optional[dict] = None) -> dict:
    return {
        "tool_version": __version__,
        "dataset": fingerprint(d, path),
        "config": cfg.to_dict(),
        "findings": [evaluation_to_dict(e) for e in findings(evaluations)],
        "all_pairs": [evaluation_to_dict(e) for e in evaluations],
        "timing": timing or {},
    }


def write_json(report: dict, fh) -> None:
    json.dump(report, fh, indent=2, sort_keys=False)
    fh.write("\n")


def write_flat_csv(evaluations, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for ev in evaluations:
        fit, diag = ev.aggregate_fit, ev.diagnostics
        writer.writerow([
            ev.x_p, ev.x_c,
            fit.alpha if fit else "", fit.beta if fit else "",
            fit.p_value if fit else "", fit.status if fit else "",
            ev.aggregate_sign, ev.mean_disagg_sign, ev.disagg_sign, int(ev.is_paradox),
            ev.classification, ev.valid_bins, ev.skipped_bins, ev.bin_spec,
            diag.dependence_pc if diag else "", diag.between_bin_outcome_spread if diag else "",
            ev.error or "",
        ])


def summary_lines(evaluations) -> list[str]:
    return [
        f"{e.x_p} | {e.x_c}: {e.classification} (aggregate {e.aggregate_sign:+d}, "
        f"mean bin sign {e.mean_disagg_sign:+.3f} over {e.valid_bins} bins)"
        for e in findings(evaluations)
    ]


# -- plot data --------------------------------------------------------------

@dataclass(frozen=True)
class PlotSeries:
    pair_id: str
    x_p: str
    x_c: str
    curve_type: str
    bin_label: str
    points: list  # (x, fitted, empirical or None, n or None), sorted by x


def _empirical(x: np.ndarray, y: np.ndarray):
    uniq = np.unique(x)
    if len(uniq) <= MAX_DISTINCT_EMPIRICAL:
        idx = np.searchsorted(uniq, x)
        n = np.bincount(idx, minlength=len(uniq))
        return uniq, np.bincount(idx, weights=y) / n, n
    order = np.argsort(x, kind="stable")
    parts = np.array_split(order, 10)
    xs = np.array([x[p].mean() for p in parts])
    means = np.array([y[p].mean() for p in parts])
    return xs, means, np.array([len(p) for p in parts])


def _curve(ev, curve_type, label, fit, x, y, model) -> PlotSeries:
    grid = np.linspace(x.min(), x.max(), GRID_POINTS)
    ex, ey, en = _empirical(x, y)
    pts = [(float(g), None, None) for g in grid]
    pts += [(float(a), float(b), int(c)) for a, b, c in zip(ex, ey, en)]
    pts.sort(key=lambda p: (p[0], p[1] is not None))
    fitted = stats.predict(fit, [p[0] for p in pts], model)
    if model == "logistic":
        # saturated fits (separation) would otherwise print exact 0 or 1
        fitted = np.clip(fitted, 1e-15, 1.0 - 1e-15)
    return PlotSeries(ev.pair_id, ev.x_p, ev.x_c, curve_type, label,
                      [(p[0], float(f), p[1], p[2]) for p, f in zip(pts, fitted)])


def plot_series(d: Dataset, evaluations, cfg: Optional[ScanConfig] = None) -> list[PlotSeries]:
    """Fitted and empirical curves for every aggregate and every fitted, valid bin."""
    cfg = cfg or ScanConfig()
    groups_by_var = {}
    series = []
    y = d.outcome
    for ev in evaluations:
        if ev.aggregate_fit is None:
            continue
        x = d[ev.x_p]
        series.append(_curve(ev, "aggregate", "", ev.aggregate_fit, x, y, cfg.model))
        if ev.x_c not in groups_by_var:
            groups = disaggregate(d, ev.x_c, cfg.bin_spec(d, ev.x_c))
            groups_by_var[ev.x_c] = {g.label: g for g in groups}
        groups = groups_by_var[ev.x_c]
        for b in ev.bin_results:
            if b.valid:
                rows = groups[b.label].row_indices
                series.append(_curve(ev, "bin", b.label, b.fit, x[rows], y[rows], cfg.model))
    return series


def _cell(v):
    return "" if v is None else repr(v) if isinstance(v, float) else str(v)


def emit_plot_data(d: Dataset, evaluations, path, cfg: Optional[ScanConfig] = None) -> int:
    """Write plot-ready curve rows to ``path``; returns the number of curves."""
    series = plot_series(d, evaluations, cfg)
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PLOT_COLUMNS)
        for s in series:
            for x, fitted, emp, n in s.points:
                writer.writerow([s.pair_id, s.x_p, s.x_c, s.curve_type, s.bin_label,
                                 _cell(x), _cell(fitted), _cell(emp), _cell(n)])
    return len(series)
