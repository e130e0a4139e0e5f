# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T15:58:13
# Last Updated: 2026-10-19T15:58:13
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Command-line entry point: ``cluster-ltmle {estimate,simulate,calibrate,report}``."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .. import __version__
from ..types import Command
from ..utils.exceptions import CalibrationError, ConfigError, LtmleError
from ..utils.logging import get_logger, setup_logging
from .commands import (
    EXIT_CALIBRATION,
    EXIT_RUNTIME,
    EXIT_USAGE,
    ErrorReport,
    cmd_calibrate,
    cmd_estimate,
    cmd_report,
    cmd_simulate,
    valid_method,
    write_error_report,
)
from .config import RunConfig, get_env_setting, resolve_config
from .export_manager import to_jsonable

logger = get_logger(__name__)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON5 run config file")
    common.add_argument("--seed", type=int, help="Master seed")
    common.add_argument("--workers", type=int, help="Parallel workers (-1 = all cores)")
    common.add_argument("--bootstrap", type=int, help="Cluster bootstrap replicates for G-computation")
    common.add_argument("--out", type=Path, help="Output directory")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR")
    common.add_argument("--log-file", type=Path, help="Also log to this file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="cluster-ltmle",
        description="Longitudinal TMLE, G-computation and IPTW for clustered data",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    estimate = sub.add_parser("estimate", parents=[common], help="Estimate regimen means and contrasts")
    estimate.add_argument("--data", type=Path, help="CSV data file")
    estimate.add_argument("--schema", type=Path, help="JSON5 column mapping")
    estimate.add_argument("--long", action="store_true", default=None, help="Input is one row per subject-visit")
    estimate.add_argument("--method", action="append", help="Estimator (repeatable)")
    estimate.add_argument("--regimen", action="append", help='Regimen such as "1,1" (repeatable)')
    estimate.add_argument("--contrast", action="append", help='Contrast such as "1,1:0,0" (repeatable)')
    estimate.add_argument("--truncation", type=float, help="Lower bound on cumulative propensities")
    estimate.add_argument("--conditioning", choices=["subset", "pooled"])
    estimate.add_argument("--dump-replicates", action="store_true", default=None)

    simulate = sub.add_parser("simulate", parents=[common], help="Run the scenario study")
    simulate.add_argument("--scenario", action="append", help="Scenario name or 'all' (repeatable)")
    simulate.add_argument("--method", action="append", help="Estimator (repeatable)")
    simulate.add_argument("--reps", type=int, help="Replicates per scenario")
    simulate.add_argument("--dgp", type=Path, help="DGP config file")
    simulate.add_argument("--clusters", type=int)
    simulate.add_argument("--per-cluster", type=int)

    calibrate = sub.add_parser("calibrate", parents=[common], help="Calibrate the DGP to a target delta")
    calibrate.add_argument("--target", type=float, help="Target delta")
    calibrate.add_argument("--dgp", type=Path, help="Base (or frozen) DGP config file")
    calibrate.add_argument("--n-mc", type=int, help="Oracle draws")

    report = sub.add_parser("report", parents=[common], help="Re-render estimates or scenario CSVs")
    report.add_argument("inputs", nargs="+", type=Path)
    return parser


def parse_contrast(text: str) -> List[str]:
    """``"1,1:0,0"`` (or ``"11:00"``) → ["1,1", "0,0"]."""
    parts = text.split(":")
    if len(parts) != 2 or not all(p.strip() for p in parts):
        raise ConfigError(f"Contrast must look like '1,1:0,0', got '{text}'")
    return [p.strip() for p in parts]


def _put(overrides: Dict[str, Any], section: Optional[str], key: str, value: Any) -> None:
    if value is None:
        return
    if section is None:
        overrides[key] = value
    else:
        overrides.setdefault(section, {})[key] = value


def flag_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Translate parsed flags into a config layer."""
    command = Command(args.command)
    overrides: Dict[str, Any] = {"command": command.value}
    _put(overrides, None, "seed", args.seed)
    _put(overrides, None, "workers", args.workers)
    _put(overrides, "inference", "bootstrap", args.bootstrap)
    _put(overrides, "output", "directory", str(args.out) if args.out else None)
    _put(overrides, "output", "log_level", args.log_level)
    _put(overrides, "output", "log_file", str(args.log_file) if args.log_file else None)

    methods = getattr(args, "method", None)
    if methods:
        methods = [valid_method(m).value for m in methods]

    if command == Command.ESTIMATE:
        _put(overrides, "data", "path", str(args.data) if args.data else None)
        _put(overrides, "data", "columns", str(args.schema) if args.schema else None)
        _put(overrides, "data", "long", args.long)
        _put(overrides, "estimation", "methods", methods)
        _put(overrides, "estimation", "regimens", args.regimen)
        _put(overrides, "estimation", "contrasts", [parse_contrast(c) for c in args.contrast] if args.contrast else None)
        _put(overrides, "estimation", "truncation", args.truncation)
        _put(overrides, "estimation", "conditioning", args.conditioning)
        _put(overrides, "inference", "dump_replicates", args.dump_replicates)
    elif command == Command.SIMULATE:
        _put(overrides, "simulation", "scenarios", args.scenario)
        _put(overrides, "simulation", "methods", methods)
        _put(overrides, "simulation", "reps", args.reps)
        _put(overrides, "simulation", "dgp", str(args.dgp) if args.dgp else None)
        _put(overrides, "simulation", "clusters", args.clusters)
        _put(overrides, "simulation", "per_cluster", args.per_cluster)
    elif command == Command.CALIBRATE:
        _put(overrides, "calibration", "target", args.target)
        _put(overrides, "calibration", "dgp", str(args.dgp) if args.dgp else None)
        _put(overrides, "calibration", "n_mc", args.n_mc)
    return overrides


def dispatch(cfg: RunConfig, args: argparse.Namespace) -> int:
    command = Command(args.command)
    if command == Command.ESTIMATE:
        return cmd_estimate(cfg)
    if command == Command.SIMULATE:
        return cmd_simulate(cfg)
    if command == Command.CALIBRATE:
        return cmd_calibrate(cfg)
    return cmd_report(cfg, list(args.inputs))


def _exit_code(error: Exception) -> int:
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    if isinstance(error, CalibrationError):
        return EXIT_CALIBRATION
    return EXIT_RUNTIME


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the cluster-ltmle command line."""
    args = build_parser().parse_args(argv)
    error_dir = args.out or Path(get_env_setting("CLUSTER_LTMLE_OUTPUT_DIR"))

    try:
        setup_logging(args.log_level or get_env_setting("CLUSTER_LTMLE_LOG_LEVEL"))
        cfg = resolve_config(args.config, flag_overrides(args))
        error_dir = cfg.output.directory
        setup_logging(cfg.output.log_level, file_path=str(cfg.output.log_file) if cfg.output.log_file else None)
        return dispatch(cfg, args)
    except Exception as error:
        code = _exit_code(error)
        details = dict(getattr(error, "details", None) or {})
        if isinstance(error, CalibrationError):
            details["trace"] = error.trace
        if isinstance(error, LtmleError):
            logger.error(f"{type(error).__name__}: {error}")
        else:
            logger.exception(f"Unexpected error: {error}")
        write_error_report(
            Path(error_dir),
            ErrorReport(
                message=str(error),
                error_type=type(error).__name__,
                exit_code=code,
                details=to_jsonable(details) or None,
            ),
        )
        return code


if __name__ == "__main__":
    sys.exit(main())
