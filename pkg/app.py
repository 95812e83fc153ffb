#!/usr/bin/env python3
"""
Laurent Lab command-line interface

Entry point for the experiment runners: Fejer convergence, weight sweeps,
Boyd index tables, the verification suite and Stechkin calibration.

Exit codes: 0 when every check passes, 1 when a check or regression guard
fails, 2 on configuration errors and out-of-domain parameters.
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

from experiments.boyd_table import run_boyd_table
from experiments.calibrate import CalibrationRecord, calibration_report
from experiments.config import (
    LOG_LEVEL_ENV,
    OUTPUT_FORMATS,
    WEIGHT_FAMILIES,
    ExperimentConfig,
    apply_overrides,
    load_config,
)
from experiments.fejer import run_fejer_convergence
from experiments.report import write_report
from experiments.verify import run_verification_suite
from experiments.weight_sweep import run_weight_sweep
from laurent_lab.errors import ConfigError, DomainError

# Load environment variables
load_dotenv()

logger = logging.getLogger("laurent_lab.app")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

DEFAULT_CALIBRATION_PATH = "calibration.json"


def get_runtime_settings() -> Dict[str, str]:
    """Runtime settings from the environment."""
    return {
        "log_level": os.getenv(LOG_LEVEL_ENV, "INFO").upper(),
    }


def configure_logging(level: Optional[str] = None):
    settings = get_runtime_settings()
    name = (level or settings["log_level"]).upper()
    if not isinstance(logging.getLevelName(name), int):
        raise ConfigError(f"Unknown log level: {name}")
    logging.basicConfig(
        level=name, format="%(asctime)s - %(levelname)s - %(message)s", force=True
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Path to a KEY=value config file")
    common.add_argument("--out", help="Report path (stdout when omitted)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Report format")
    common.add_argument("--seed", type=int, help="Base random seed")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--tolerance", type=float, help="Comparison tolerance")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(
        description="Laurent operators on weighted rearrangement-invariant spaces"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    fejer = subparsers.add_parser(
        "fejer", parents=[common], help="Fejer mean convergence on a space"
    )
    fejer.add_argument("--symbol", help="Symbol literal, e.g. 'hat(1,pi)'")
    fejer.add_argument("--space", help="Space literal, e.g. 'lebesgue(3)'")
    fejer.add_argument("--weight", help="Weight literal, e.g. 'power(0.2)'")
    fejer.add_argument("--calibration", help="Calibration record (JSON)")
    fejer.add_argument(
        "--fejer-constant", type=float, help="Constant C of the upper-bound shape"
    )

    weights = subparsers.add_parser(
        "weights", parents=[common], help="A_p sweep over a weight family"
    )
    weights.add_argument("--family", choices=WEIGHT_FAMILIES, help="Weight family")
    weights.add_argument("--weight", help="Base weight for the exponent family")

    boyd = subparsers.add_parser(
        "boyd", parents=[common], help="Boyd index table for unweighted spaces"
    )
    boyd.add_argument("--j-max", type=int, help="Largest dilation factor")

    verify = subparsers.add_parser(
        "verify", parents=[common], help="Run the verification suite"
    )
    verify.add_argument(
        "--inject-asymmetric",
        action="store_true",
        default=None,
        help="Also run the reflection check on an asymmetric weight",
    )
    verify.add_argument(
        "--acceptance-n", type=int, help="Section half-width for the l^2 acceptance"
    )

    calibrate = subparsers.add_parser(
        "calibrate", parents=[common], help="Calibrate Stechkin constants"
    )
    calibrate.add_argument(
        "--calibration",
        help=f"Record to merge into and save (default {DEFAULT_CALIBRATION_PATH})",
    )

    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults < environment < config file < command-line flags."""
    config = load_config(args.config, kind=args.command)
    overrides = {
        "output": args.out,
        "format": args.format,
        "seed": args.seed,
        "threads": args.threads,
        "tolerance": args.tolerance,
    }
    for flag, name in (
        ("symbol", "symbol"),
        ("space", "space"),
        ("weight", "weight"),
        ("calibration", "calibration"),
        ("fejer_constant", "fejer_constant"),
        ("family", "family"),
        ("j_max", "j_max"),
        ("inject_asymmetric", "inject_asymmetric"),
        ("acceptance_n", "acceptance_n"),
    ):
        overrides[name] = getattr(args, flag, None)
    return apply_overrides(config, overrides).validate()


def run_command(config: ExperimentConfig) -> int:
    """Run the configured experiment and write its report; returns the exit code."""
    if config.kind == "fejer":
        report = run_fejer_convergence(config)
    elif config.kind == "weights":
        report = run_weight_sweep(config)
    elif config.kind == "boyd":
        report = run_boyd_table(config)
    elif config.kind == "verify":
        report = run_verification_suite(config).to_report()
    else:
        path = config.calibration or DEFAULT_CALIBRATION_PATH
        existing = CalibrationRecord.load(path) if os.path.exists(path) else None
        record, report = calibration_report(config, existing)
        record.save(path)

    write_report(report, config.output, config.format)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the subcommand and map the outcome to an exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        configure_logging(args.log_level)
        config = resolve_config(args)
        logger.info(
            f"Running {config.kind} (seed={config.seed}, threads={config.threads})"
        )
        return run_command(config)
    except (ConfigError, DomainError) as e:
        logger.error(f"Configuration error: {str(e)}")
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"Error in {args.command}: {str(e)}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
