"""Command-line entry point for calibration, optimization and sequence tools."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import orjson
from sfqsim.config import get_settings
from sfqsim.shared.errors import ContractViolationError, SfqSimError

from .commands import (
    calibrate_command,
    decompose_command,
    evaluate_command,
    export_command,
    optimize_command,
    sweep_fsim_command,
)

logger = logging.getLogger(__name__)

EXIT_ERROR = 2

Handler = Callable[[argparse.Namespace], int]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration")
    common.add_argument("--seed", type=int, help="Override the optimizer seed")
    common.add_argument(
        "--out", type=Path, help="Output directory (default: config or SFQSIM_OUTPUT_DIR)"
    )
    common.add_argument(
        "--backend",
        choices=["exact-segment", "trotter4"],
        help="Propagator used to score sequences (default: SFQSIM_BACKEND)",
    )
    common.add_argument(
        "--budget",
        type=int,
        default=0,
        help="Number of hyperparameter-search trials (optimize; default: single run)",
    )
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="sfqsim", description="SFQ-controlled two-transmon gate simulator"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    calibrate = subparsers.add_parser(
        "calibrate", parents=[common], help="Find the idle fluxes"
    )
    calibrate.set_defaults(handler=calibrate_command)

    optimize = subparsers.add_parser(
        "optimize", parents=[common], help="Optimize a kick and excursion schedule"
    )
    optimize.add_argument("--target", help="Gate id (default: config target)")
    optimize.add_argument("--resume", type=Path, help="Stage checkpoint to continue from")
    optimize.set_defaults(handler=optimize_command)

    sweep = subparsers.add_parser(
        "sweep-fsim", parents=[common], help="Scan fSim quality over hold times"
    )
    sweep.set_defaults(handler=sweep_fsim_command)

    decompose = subparsers.add_parser(
        "decompose", parents=[common], help="Build CZ or CNOT from two fSim excursions"
    )
    decompose.add_argument("--target", choices=["cz", "cnot"], help="Composite gate")
    decompose.set_defaults(handler=decompose_command)

    evaluate = subparsers.add_parser(
        "evaluate", parents=[common], help="Score a sequence file against a target"
    )
    evaluate.add_argument("sequence", type=Path, help="Raw or compressed sequence file")
    evaluate.add_argument("--target", help="Gate id (default: config target)")
    evaluate.set_defaults(handler=evaluate_command)

    export = subparsers.add_parser(
        "export", parents=[common], help="Convert between sequence formats"
    )
    export.add_argument("sequence", type=Path, help="Raw or compressed sequence file")
    export.add_argument(
        "--format", choices=["raw", "compressed"], default="compressed", help="Output format"
    )
    export.set_defaults(handler=export_command)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point."""
    args = build_parser().parse_args(argv)
    level = "DEBUG" if args.verbose else get_settings().log_level
    logging.basicConfig(level=level, format="%(message)s")

    handler: Handler = args.handler
    try:
        if args.budget < 0:
            raise ContractViolationError("--budget must not be negative", budget=args.budget)
        return handler(args)
    except SfqSimError as exc:
        logger.debug("%s failed", args.command, exc_info=True)
        sys.stderr.write(orjson.dumps(exc.to_record()).decode() + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
