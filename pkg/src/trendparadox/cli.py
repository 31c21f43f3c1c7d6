"""Command-line interface: ``trendparadox scan | synth | diagnose``.

Exit codes: 0 on success, 2 on invalid flags or parameters, 3 on data errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import __version__
from .binning import BinSpec
from .dataset import DataError, VariableSpec, load_csv
from .detector import ScanConfig, default_jobs, diagnostics, mixture_identity_check, scan_pairs
from .report import build_report, emit_plot_data, summary_lines, write_flat_csv, write_json
from . import synthgen

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(t) for t in _csv_list(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _bin_spec(text: str) -> BinSpec:
    try:
        return BinSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad bin spec {text!r}: {exc}")


def _bins_for(text: str):
    var, sep, spec = text.partition("=")
    if not sep or not var:
        raise argparse.ArgumentTypeError(f"expected VAR=STRATEGY:K, got {text!r}")
    return var.strip(), _bin_spec(spec)


def _read_header(path) -> list[str]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [h.strip() for h in next(csv.reader(fh), [])]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def _load(path, outcome: str, variables, model: str):
    header = _read_header(path)
    if outcome not in header:
        raise DataError(f"outcome column {outcome!r} not found in {path}")
    if variables is None:
        variables = [h for h in header if h != outcome]
    kind = "binary_outcome" if model == "logistic" else "continuous_outcome"
    schema = [VariableSpec(v) for v in variables] + [VariableSpec(outcome, kind)]
    return load_csv(path, schema), variables


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trendparadox", description="Detect Simpson's paradoxes in trends.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="scan all ordered variable pairs")
    scan.add_argument("--input", required=True)
    scan.add_argument("--outcome", required=True)
    scan.add_argument("--vars", type=_csv_list, default=None,
                      help="comma-separated variables (default: all non-outcome columns)")
    scan.add_argument("--threshold", type=float, default=0.05)
    scan.add_argument("--bins", type=_bin_spec, default=None, metavar="STRATEGY:K",
                      help="binning for every conditioning variable (default: automatic)")
    scan.add_argument("--bins-for", type=_bins_for, action="append", default=[],
                      metavar="VAR=STRATEGY:K")
    scan.add_argument("--min-bin-rows", type=int, default=None)
    scan.add_argument("--min-valid-bins", type=int, default=2)
    scan.add_argument("--model", choices=["logistic", "linear"], default="logistic")
    scan.add_argument("--out", default=None, help="report path (default: standard output)")
    scan.add_argument("--plot-data", default=None)
    scan.add_argument("--jobs", type=int, default=None)
    scan.add_argument("--format", choices=["json", "csv"], default="json")

    synth = sub.add_parser("synth", help="write a synthetic dataset")
    synth.add_argument("--kind", required=True,
                       choices=["sessions", "reversal", "null", "majority-mask"])
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True)
    synth.add_argument("--n-sessions", type=int, default=100_000)
    synth.add_argument("--p-continue", type=float, default=0.5)
    synth.add_argument("--max-len", type=int, default=8)
    synth.add_argument("--base-accept", type=float, default=0.2)
    synth.add_argument("--within-slope", type=float, default=None)
    synth.add_argument("--between-offset", type=float, default=0.5)
    synth.add_argument("--n-per-group", type=int, default=50_000)
    synth.add_argument("--centers", type=_float_list, default=(0.0, 3.0))
    synth.add_argument("--offsets", type=_float_list, default=(2.0, -2.0))
    synth.add_argument("--n", type=int, default=None)
    synth.add_argument("--m-vars", type=int, default=3)
    synth.add_argument("--p-major", type=float, default=0.65)

    diag = sub.add_parser("diagnose", help="necessary-condition diagnostics for one pair")
    diag.add_argument("--input", required=True)
    diag.add_argument("--outcome", required=True)
    diag.add_argument("--xp", required=True)
    diag.add_argument("--xc", required=True)
    diag.add_argument("--bins", type=_bin_spec, default=None, metavar="STRATEGY:K")
    diag.add_argument("--min-bin-rows", type=int, default=None)
    diag.add_argument("--model", choices=["logistic", "linear"], default="logistic")
    diag.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def _config(args) -> ScanConfig:
    try:
        return ScanConfig(
            threshold=args.threshold if hasattr(args, "threshold") else 0.05,
            bin_overrides=dict(getattr(args, "bins_for", [])),
            default_bins=args.bins,
            min_bin_rows=args.min_bin_rows,
            min_valid_bins=getattr(args, "min_valid_bins", 2),
            model=args.model,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_scan(args) -> int:
    cfg = _config(args)
    if args.jobs is not None and args.jobs < 1:
        raise UsageError("--jobs must be positive")
    jobs = args.jobs or default_jobs()
    d, variables = _load(args.input, args.outcome, args.vars, cfg.model)
    for var in cfg.bin_overrides:
        if var not in d.columns:
            raise DataError(f"--bins-for names unknown column {var!r}")

    start = time.perf_counter()
    evaluations = scan_pairs(d, cfg, variables, jobs=jobs)
    elapsed = time.perf_counter() - start

    report = build_report(d, evaluations, cfg, args.input,
                          timing={"scan_seconds": round(elapsed, 6), "jobs": jobs})
    summary = summary_lines(evaluations)
    text_out = sys.stderr if args.out is None else sys.stdout
    if args.out is None:
        _write_report(report, evaluations, args.format, sys.stdout)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            _write_report(report, evaluations, args.format, fh)
    if args.plot_data:
        emit_plot_data(d, evaluations, args.plot_data, cfg)
    for line in summary:
        print(line, file=text_out)
    print(f"{len(evaluations)} pairs evaluated, {len(summary)} findings", file=text_out)
    return EXIT_OK


def _write_report(report, evaluations, fmt, fh):
    if fmt == "json":
        write_json(report, fh)
    else:
        write_flat_csv(evaluations, fh)


def cmd_synth(args) -> int:
    try:
        if args.kind == "sessions":
            d = synthgen.gen_sessions(synthgen.SessionGenParams(
                n_sessions=args.n_sessions, p_continue=args.p_continue, max_len=args.max_len,
                base_accept=args.base_accept,
                within_slope=-0.3 if args.within_slope is None else args.within_slope,
                between_offset=args.between_offset, seed=args.seed))
        elif args.kind == "reversal":
            d = synthgen.gen_reversal(synthgen.ReversalGenParams(
                n_per_group=args.n_per_group, group_centers=args.centers,
                group_offsets=args.offsets,
                within_slope=0.5 if args.within_slope is None else args.within_slope,
                seed=args.seed))
        elif args.kind == "null":
            d = synthgen.gen_null(10_000 if args.n is None else args.n, args.m_vars, args.seed)
        else:
            d = synthgen.gen_majority_mask(args.seed, n=100_000 if args.n is None else args.n,
                                           p_major=args.p_major)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d.to_csv(args.out)
    print(f"{d.n_rows} rows written to {args.out}")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    if args.xp == args.xc:
        raise UsageError(f"identical variables: --xp and --xc are both {args.xp!r}")
    cfg = _config(args)
    d, _ = _load(args.input, args.outcome, [args.xp, args.xc], cfg.model)
    if (d[args.xp] == d[args.xc]).all():
        raise DataError(f"identical variables: {args.xc!r} is a copy of {args.xp!r}")
    diag = diagnostics(d, args.xp, args.xc, cfg)
    try:
        deviation = mixture_identity_check(d, args.xp, args.xc)
        note = None
    except DataError as exc:
        deviation, note = None, str(exc)
    result = {
        "x_p": args.xp,
        "x_c": args.xc,
        "dependence_pc": diag.dependence_pc,
        "between_bin_outcome_spread": diag.between_bin_outcome_spread,
        "condition1_met": diag.condition1_met,
        "condition2_met": diag.condition2_met,
        "mixture_identity_deviation": deviation,
    }
    if note:
        result["mixture_identity_note"] = note
    if args.format == "json":
        print(json.dumps(result, indent=2))
    else:
        for key, value in result.items():
            print(f"{key}: {value}")
    return EXIT_OK


COMMANDS = {"scan": cmd_scan, "synth": cmd_synth, "diagnose": cmd_diagnose}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, KeyError) as exc:
        print(f"{parser.prog} {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
