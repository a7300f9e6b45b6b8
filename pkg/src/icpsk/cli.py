"""Command line interface: problem files in, tables and CSV out.

Problem files are JSON documents with 1-based message indices:

    {
      "m": 5,
      "N": 3,
      "L": [[1,1,1],[0,1,0],[0,1,0],[1,1,1],[1,1,0]],
      "receivers": [{"wants": 1, "knows": [2,3,4,5]}, ...],
      "labeling": {"type": "natural"}
    }

All SNR flags are in dB; --gamma-si also accepts "noiseless". Exit codes:
0 success, 2 parse or validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence, TextIO

from .analysis import NOISELESS, SnrSpec, db_to_linear, linear_to_db, \
    select_strategy_noiseless, select_strategy_noisy, threshold_gamma
from .core import EncodingMatrix, IndexCodingProblem, enumerate_strategies, \
    validate_problem
from .psk import PskLabeling, compute_pair_set, natural_labeling
from .sim import ChannelConfig, SimulationReport, run_sweep

__all__ = [
    "CSV_HEADER",
    "ProblemFileError",
    "parse_problem_text",
    "parse_problem_file",
    "dump_problem",
    "write_csv",
    "main",
]

CSV_HEADER = ("snr_db,receiver,strategy,pair_count,si_count,"
              "theory,simulated,ci_halfwidth,errors,trials")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RUNTIME = 3


class ProblemFileError(Exception):
    """A problem file failed to parse or violates a model invariant."""


# =====================================================================
# Problem file parsing and emission
# =====================================================================

def _expect(doc: dict, field: str, kind: type):
    if field not in doc:
        raise ProblemFileError(f"field '{field}': missing")
    value = doc[field]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ProblemFileError(
            f"field '{field}': expected {kind.__name__}, got "
            f"{type(value).__name__}")
    return value


def parse_problem_text(text: str) -> tuple[IndexCodingProblem,
                                           EncodingMatrix, PskLabeling]:
    """Parse a problem document, checking every invariant it must satisfy."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProblemFileError("top level: expected an object")

    m = _expect(doc, "m", int)
    n_bits = _expect(doc, "N", int)
    rows = _expect(doc, "L", list)
    if len(rows) != m:
        raise ProblemFileError(f"field 'L': expected {m} rows, got {len(rows)}")
    for r, row in enumerate(rows, start=1):
        if not isinstance(row, list) or len(row) != n_bits:
            raise ProblemFileError(
                f"field 'L': row {r} must be a list of {n_bits} bits")
        if any(b not in (0, 1) or isinstance(b, bool) for b in row):
            raise ProblemFileError(f"field 'L': row {r} has a non-bit entry")

    recs = _expect(doc, "receivers", list)
    if not recs:
        raise ProblemFileError("field 'receivers': must be nonempty")
    demands: list[int] = []
    side_info: list[list[int]] = []
    for i, rec in enumerate(recs, start=1):
        if not isinstance(rec, dict):
            raise ProblemFileError(f"field 'receivers[{i}]': expected object")
        wants = rec.get("wants")
        knows = rec.get("knows")
        if not isinstance(wants, int) or isinstance(wants, bool):
            raise ProblemFileError(
                f"field 'receivers[{i}].wants': expected integer")
        if not isinstance(knows, list) or \
                any(not isinstance(k, int) or isinstance(k, bool) for k in knows):
            raise ProblemFileError(
                f"field 'receivers[{i}].knows': expected list of integers")
        demands.append(wants)
        side_info.append(knows)

    lab_doc = _expect(doc, "labeling", dict)
    lab_type = lab_doc.get("type")
    if lab_type == "natural":
        labeling = natural_labeling(n_bits)
    elif lab_type == "custom":
        labels = lab_doc.get("labels")
        if not isinstance(labels, list):
            raise ProblemFileError("field 'labeling.labels': expected list")
        try:
            labeling = PskLabeling(n_bits, tuple(labels))
        except ValueError as exc:
            raise ProblemFileError(f"field 'labeling.labels': {exc}") from exc
    else:
        raise ProblemFileError(
            "field 'labeling.type': expected 'natural' or 'custom'")

    problem = IndexCodingProblem(m, demands, side_info)
    result = validate_problem(problem)
    if not result:
        raise ProblemFileError("; ".join(result.violations))
    try:
        matrix = EncodingMatrix(rows)
    except ValueError as exc:
        raise ProblemFileError(f"field 'L': {exc}") from exc
    return problem, matrix, labeling


def parse_problem_file(path: str) -> tuple[IndexCodingProblem,
                                           EncodingMatrix, PskLabeling]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read '{path}': {exc}") from exc
    return parse_problem_text(text)


def dump_problem(problem: IndexCodingProblem, matrix: EncodingMatrix,
                 labeling: PskLabeling) -> str:
    """Emit a problem document that parses back to an identical model."""
    natural = labeling.labels == tuple(range(labeling.size))
    doc = {
        "m": problem.m,
        "N": matrix.n_bits,
        "L": [list(row) for row in matrix.rows],
        "receivers": [
            {"wants": problem.demands[i], "knows": sorted(problem.side_info[i])}
            for i in range(problem.n)
        ],
        "labeling": {"type": "natural"} if natural
        else {"type": "custom", "labels": list(labeling.labels)},
    }
    return json.dumps(doc, indent=2) + "\n"


# =====================================================================
# Output helpers
# =====================================================================

def _strategy_expr(strategy) -> str:
    y_part = "⊕".join(f"y{k}" for k in strategy.used_bits)
    if not strategy.si_subset:
        return y_part
    x_part = "⊕".join(f"x{k}" for k in sorted(strategy.si_subset))
    return f"{y_part} ⊕ {x_part}"


def _th_db(th: float) -> str:
    return "inf" if math.isinf(th) else f"{linear_to_db(th):.4f}"


def _parse_gamma_si(text: str) -> float:
    if text.strip().lower() == "noiseless":
        return NOISELESS
    try:
        return float(text)
    except ValueError as exc:
        raise ProblemFileError(
            f"--gamma-si: expected a dB value or 'noiseless', got '{text}'"
        ) from exc


def _receiver_strategies(problem, matrix, receiver):
    strategies = enumerate_strategies(problem, matrix, receiver)
    if not strategies:
        raise ProblemFileError(
            f"receiver {receiver} has no decoding strategy; L is not an "
            f"index code for this problem")
    return strategies


def _select_receivers(problem, receiver_arg) -> list[int]:
    if not receiver_arg:
        return list(problem.receiver_indices())
    for r in receiver_arg:
        if r < 1 or r > problem.n:
            raise ProblemFileError(f"--receiver: no receiver {r}")
    return list(receiver_arg)


def write_csv(report: SimulationReport, stream: TextIO) -> None:
    """Serialize a report with full float precision, one row per cell."""
    stream.write(CSV_HEADER + "\n")
    for row in report.rows:
        stream.write(",".join([
            repr(row.snr_db), str(row.receiver), row.selector,
            str(row.pair_count), str(row.si_count), repr(row.theory),
            repr(row.simulated), repr(row.ci_halfwidth),
            str(row.errors), str(row.trials)]) + "\n")


# =====================================================================
# Subcommands
# =====================================================================

def _cmd_strategies(args) -> int:
    problem, matrix, labeling = parse_problem_file(args.problem)
    receivers = _select_receivers(problem, args.receiver)
    for r in receivers:
        strategies = _receiver_strategies(problem, matrix, r)
        knows = " ".join(f"x{k}" for k in sorted(problem.side_info[r - 1]))
        print(f"receiver {r} (wants x{problem.demands[r - 1]}, "
              f"knows {knows or '-'}):")
        for s in strategies:
            pc = len(compute_pair_set(s.selector_a, labeling))
            print(f"  a={s.selector_str}  {_strategy_expr(s):<24s}"
                  f" |I|={len(s.used_bits)} |S|={s.si_count} |P|={pc}")
    return EXIT_OK


def _cmd_select(args) -> int:
    problem, matrix, labeling = parse_problem_file(args.problem)
    gamma_si_db = _parse_gamma_si(args.gamma_si)
    noisy = not math.isinf(gamma_si_db)
    if noisy and args.gamma_ic is None:
        raise ProblemFileError("--gamma-ic is required when --gamma-si is set")
    receivers = _select_receivers(problem, args.receiver)
    for r in receivers:
        strategies = _receiver_strategies(problem, matrix, r)
        if noisy:
            snr = SnrSpec.from_db(args.gamma_ic, gamma_si_db)
            result = select_strategy_noisy(strategies, labeling,
                                           snr.gamma_ic, snr.gamma_si)
        else:
            result = select_strategy_noiseless(strategies, labeling)
        print(f"receiver {r}: selector={result.chosen.selector_str} "
              f"branch={result.branch}")
        for row in result.ranking:
            th = "-" if row.threshold is None else _th_db(row.threshold)
            print(f"  a={row.strategy.selector_str} |P|={row.pair_count} "
                  f"|S|={row.si_count} th_db={th}")
    return EXIT_OK


def _cmd_thresholds(args) -> int:
    problem, matrix, labeling = parse_problem_file(args.problem)
    gamma_si_db = _parse_gamma_si(args.gamma_si)
    gamma_si = NOISELESS if math.isinf(gamma_si_db) else db_to_linear(gamma_si_db)
    receivers = _select_receivers(problem, args.receiver)
    for r in receivers:
        strategies = _receiver_strategies(problem, matrix, r)
        print(f"receiver {r}:")
        for s in strategies:
            pc = len(compute_pair_set(s.selector_a, labeling))
            th = threshold_gamma(pc, matrix.n_bits, s.si_count, gamma_si)
            print(f"  a={s.selector_str} |P|={pc} |S|={s.si_count} "
                  f"th_db={_th_db(th)}")
    return EXIT_OK


def _sweep_points(start: float, stop: float, step: float) -> tuple[float, ...]:
    if step <= 0 or stop < start:
        raise ProblemFileError(
            "invalid sweep: need --snr-step > 0 and --snr-stop >= --snr-start")
    points = []
    k = 0
    while True:
        value = start + k * step
        if value > stop + 1e-9:
            break
        points.append(value)
        k += 1
    return tuple(points)


def _cmd_simulate(args) -> int:
    problem, matrix, labeling = parse_problem_file(args.problem)
    gamma_si_db = _parse_gamma_si(args.gamma_si)
    receivers = _select_receivers(problem, args.receiver)
    config = ChannelConfig(
        kind=args.channel,
        gamma_ic_db=_sweep_points(args.snr_start, args.snr_stop, args.snr_step),
        gamma_si_db=gamma_si_db,
        trials=args.trials,
        seed=args.seed,
        max_workers=args.max_workers,
        min_errors=args.min_errors)
    report = run_sweep(problem, matrix, labeling, receivers, config)
    if args.out == "-":
        write_csv(report, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_csv(report, fh)
    return EXIT_OK


# =====================================================================
# Entry point
# =====================================================================

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icpsk",
        description="Decoding strategy analysis and bit error simulation "
                    "for index coding over PSK broadcast channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strategies", help="enumerate decoding strategies")
    p.add_argument("problem")
    p.add_argument("--receiver", type=int, action="append")
    p.set_defaults(func=_cmd_strategies)

    p = sub.add_parser("select", help="pick the best strategy per receiver")
    p.add_argument("problem")
    p.add_argument("--gamma-ic", type=float, default=None,
                   help="coded channel Es/N0 in dB (required for noisy side info)")
    p.add_argument("--gamma-si", default="noiseless",
                   help="side info per-bit SNR in dB, or 'noiseless'")
    p.add_argument("--receiver", type=int, action="append")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("thresholds", help="threshold SNR per strategy")
    p.add_argument("problem")
    p.add_argument("--gamma-si", required=True,
                   help="side info per-bit SNR in dB, or 'noiseless'")
    p.add_argument("--receiver", type=int, action="append")
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("simulate", help="Monte Carlo sweep to CSV")
    p.add_argument("problem")
    p.add_argument("--channel", choices=("awgn", "rayleigh"), default="awgn")
    p.add_argument("--snr-start", type=float, required=True,
                   help="first Es/N0 sweep point in dB")
    p.add_argument("--snr-stop", type=float, required=True)
    p.add_argument("--snr-step", type=float, default=2.0)
    p.add_argument("--gamma-si", default="noiseless")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True, help="output CSV path, '-' for stdout")
    p.add_argument("--receiver", type=int, action="append")
    p.add_argument("--max-workers", type=int, default=4)
    p.add_argument("--min-errors", type=int, default=None)
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - map anything else to exit 3
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
