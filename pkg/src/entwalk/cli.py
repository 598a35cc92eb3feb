"""Command-line entry point: ``entwalk {walk1,walk2,tables,verify}``.

Exit codes: 0 success, 1 invalid input, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import InvariantViolation, WalkError
from .experiments import (
    DEFAULT_STEP_CAP,
    DEFAULT_TABLE_STEPS,
    ConfigError,
    ExperimentConfig,
    cmd_tables,
    cmd_verify,
    cmd_walk1,
    cmd_walk2,
    write_record,
)

log = logging.getLogger("entwalk")


def _steps_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coin", default="hadamard", help="'hadamard' or four complex entries a,b,c,d (row-major)")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out", default="-", help="output file, '-' for stdout (default)")
    p.add_argument("--max-steps-cap", type=int, default=DEFAULT_STEP_CAP, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entwalk", description="Discrete-time quantum walks with one or two walkers on a line."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("walk1", help="single-walker position distribution")
    p1.add_argument("--steps", type=int, required=True)
    p1.add_argument("--initial", default="up", help="initial coin: up or down")
    p1.add_argument("--classical", action="store_true", help="emit the classical binomial walk instead")
    _add_common(p1)

    p2 = sub.add_parser("walk2", help="two-walker joint distribution and statistics")
    p2.add_argument("--steps", type=int, required=True)
    p2.add_argument("--initial", default="separable", help="separable, plus, minus or phase:<radians>")
    p2.add_argument("--phase", type=float, default=None, help="relative phase; same as --initial phase:<radians>")
    _add_common(p2)

    pt = sub.add_parser("tables", help="distance or correlation table")
    pt.add_argument("which", choices=("distance", "correlation"))
    pt.add_argument("--steps", type=_steps_list, default=list(DEFAULT_TABLE_STEPS))
    _add_common(pt)

    pv = sub.add_parser("verify", help="run the invariant suite and write a validation report")
    pv.add_argument("--steps", type=int, default=12, help="largest n for dense-oracle comparisons")
    pv.add_argument("--table-steps", type=int, default=100, help="largest N for the table identities")
    pv.add_argument("--format", default="csv", choices=("csv", "json"), help="'csv' writes the text report")
    pv.add_argument("--out", default="-")
    return parser


def run(args: argparse.Namespace) -> int:
    if args.command == "verify":
        record = cmd_verify(args.steps, args.table_steps)
        write_record(record, args.format, args.out)
        return record.exit_code

    if args.command == "tables":
        config = ExperimentConfig(
            steps=tuple(args.steps),
            coin=args.coin,
            output_format=args.format,
            output_path=args.out,
            step_cap=args.max_steps_cap,
        )
        record = cmd_tables(args.which, args.steps, config)
    else:
        initial = args.initial
        if args.command == "walk2" and args.phase is not None:
            initial = f"phase:{args.phase!r}"
        config = ExperimentConfig(
            steps=args.steps,
            initial_condition=initial,
            coin=args.coin,
            output_format=args.format,
            output_path=args.out,
            classical=getattr(args, "classical", False),
            step_cap=args.max_steps_cap,
        )
        record = cmd_walk1(config) if args.command == "walk1" else cmd_walk2(config)
    for path in write_record(record, config.output_format, config.output_path):
        log.info("wrote %s", path)
    return record.exit_code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return run(args)
    except InvariantViolation as exc:
        print(f"entwalk: invariant violation: {exc}", file=sys.stderr)
        return 2
    except (WalkError, ConfigError, ValueError) as exc:
        print(f"entwalk: invalid input: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
