"""Command-line entry point: ``catseg {fit,hybrid,simulate,approx-check}``.

Exit codes: 0 on success, 2 on malformed input, 3 when the penalty
calibration fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .approx import besov_bound_check
from .calibrate import calibrate_c0, default_dmax
from .core import (
    CalibrationError,
    CategorySequence,
    DegenerateInputError,
    FitResult,
    InvalidArgumentError,
    Partition,
    is_power_of_two,
)
from .dyadic_select import fit_preliminary
from .hybrid import HybridConfig, LinearPenalty, LogPenalty, LogPracticalPenalty, fit_hybrid, map_to_full_indices
from .sim import build_distribution, comparison_table, load_spec, reports_to_csv

EXIT_OK, EXIT_INPUT, EXIT_CALIBRATION = 0, 2, 3


class InputError(Exception):
    pass


def read_sequence(path: str, r: int | None, pad: bool) -> CategorySequence:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise InputError(f"non-integer token in input: {exc}") from exc
    if not values:
        raise InputError("input holds no symbols")
    r = r if r is not None else max(2, max(values))
    if min(values) < 1 or max(values) > r:
        raise InputError(f"symbols must lie in 1..{r}")
    if not is_power_of_two(len(values)):
        if not pad:
            raise InputError(f"length {len(values)} is not a power of two (use --pad)")
        target = 1 << (len(values) - 1).bit_length()
        values += [values[-1]] * (target - len(values))
    return CategorySequence(np.array(values), r)


def _segments_json(partition: Partition, probs: np.ndarray) -> list[dict]:
    return [
        {"start": a, "end": b, "probs": [float(x) for x in row]}
        for (a, b), row in zip(partition.segments(), probs)
    ]


def fit_to_dict(fit: FitResult, r: int) -> dict:
    return {
        "n": fit.partition.n,
        "r": r,
        "penalty_constant": fit.penalty_constant,
        "dimension": fit.dimension,
        "criterion": fit.criterion,
        "segments": _segments_json(fit.partition, fit.segment_probs),
    }


def fit_from_dict(data: dict) -> FitResult:
    segs = data["segments"]
    partition = Partition(tuple(s["start"] for s in segs) + (segs[-1]["end"],))
    probs = np.array([s["probs"] for s in segs], dtype=float)
    return FitResult(partition, probs, float(data["criterion"]), float(data["penalty_constant"]))


def _positive_or_auto(text: str):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _int_or_auto(text: str):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return value


def _penalty(text: str):
    name, _, args = text.partition(":")
    try:
        values = [float(v) for v in args.split(",")] if args else []
        if name == "log" and len(values) == 2:
            return LogPenalty(*values)
        if name == "logp" and len(values) <= 1:
            return LogPracticalPenalty(*values)
        if name == "linear" and len(values) <= 1:
            return LinearPenalty(*values)
    except (ValueError, InvalidArgumentError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    raise argparse.ArgumentTypeError("penalty must be log:c1,c2, logp[:beta] or linear[:beta]")


def _dims(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_fit(args) -> int:
    seq = read_sequence(args.input, args.r, args.pad)
    d_max = args.dmax or default_dmax(seq.n)
    c0 = args.c0 if args.c0 is not None else calibrate_c0(seq, d_max)
    fit = fit_preliminary(seq, c0)
    _emit(json.dumps(fit_to_dict(fit, seq.r), indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_hybrid(args) -> int:
    seq = read_sequence(args.input, args.r, args.pad)
    if seq.n < 2:
        raise InputError("the hybrid estimator needs at least two symbols")
    res = fit_hybrid(seq, HybridConfig(c0=args.c0, penalty=args.penalty, d_max=args.dmax))
    pen = res.penalty
    constants = {"c1": pen.c1, "c2": pen.c2} if isinstance(pen, LogPenalty) else {"beta": pen.beta}
    stage1 = map_to_full_indices(res.stage1.partition)
    out = {
        "n": seq.n,
        "r": seq.r,
        "penalty_constant": res.stage1.penalty_constant,
        "stage2_penalty": {"form": type(pen).__name__, **constants},
        "dimension": res.dimension,
        "criterion": res.stage2_criterion,
        "segments": _segments_json(res.partition, res.segment_probs),
        "stage1": {"dimension": stage1.dimension, "breakpoints": list(stage1.breakpoints)},
    }
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    if not is_power_of_two(spec.n):
        raise InputError(f"spec length {spec.n} is not a power of two")
    reports = comparison_table(spec, args.reps, args.seed, workers=args.workers)
    _emit(reports_to_csv(reports), args.output)
    return EXIT_OK


def cmd_approx_check(args) -> int:
    spec = load_spec(args.spec)
    if not is_power_of_two(spec.n):
        raise InputError(f"spec length {spec.n} is not a power of two")
    s = build_distribution(spec)
    dims = args.dims or [2**k for k in range(max(1, spec.n.bit_length() - 1))]
    report = besov_bound_check(s, args.alpha, args.p, dims)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dimension", "e_d", "ratio"])
    for row in report.rows():
        writer.writerow([row["dimension"], repr(row["e_d"]), repr(row["ratio"])])
    _emit(buf.getvalue(), args.output)
    status = "PASS" if report.passed else "FAIL"
    print(f"slope={report.slope:.4g} max_ratio={report.max_ratio:.4g} {status}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catseg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fit_args(p):
        p.add_argument("input", help="file of whitespace-separated labels in 1..r ('-' for stdin)")
        p.add_argument("--r", type=int, default=None, help="alphabet size (default: largest label)")
        p.add_argument("--c0", type=_positive_or_auto, default=None, help="penalty constant or 'auto'")
        p.add_argument("--dmax", type=_int_or_auto, default=None, help="maximal dimension or 'auto'")
        p.add_argument("--pad", action="store_true", help="repeat the last label up to a power of two")
        p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("fit", help="preliminary estimator")
    add_fit_args(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("hybrid", help="two-stage hybrid estimator")
    add_fit_args(p)
    p.add_argument("--penalty", type=_penalty, default=LinearPenalty(), help="log:c1,c2 | logp[:beta] | linear[:beta]")
    p.set_defaults(func=cmd_hybrid)

    p = sub.add_parser("simulate", help="Monte Carlo comparison on a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("approx-check", help="greedy approximation rates on a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--dims", type=_dims, default=None, help="comma-separated dimensions")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_approx_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CalibrationError as exc:
        print(f"catseg: calibration failed: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except (InputError, InvalidArgumentError, DegenerateInputError, OSError) as exc:
        print(f"catseg: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
