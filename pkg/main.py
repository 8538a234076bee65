#!/usr/bin/env python3
"""
Root entry: run, validate and report sparrow-search experiments.
  run <config.json> [--jobs N] [--out DIR]
  validate <config.json>
  report <results_dir> --format {csv,json,markdown}
Exit codes: 0 success, 1 validation failure, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

_ROOT = Path(__file__).resolve().parent
if str(_ROOT) not in sys.path:
    sys.path.insert(0, str(_ROOT))

from src.config import load_env, get_log_level
from src.experiment import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_RUN_FAILED,
    REPORT_FORMATS,
    emit_report,
    run_experiment,
    validate_config,
)

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="SSA / TFSSA experiments: benchmark functions and K-NN wrapper feature selection."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run every (method, problem, run) cell of a JSON experiment config")
    p_run.add_argument("config", type=Path, help="Experiment config (JSON)")
    p_run.add_argument("--jobs", type=int, default=1, help="Worker processes for independent run cells (default 1)")
    p_run.add_argument("--out", type=Path, default=None, help="Output directory (overrides SSA_OUTPUT_DIR and the config)")

    p_val = sub.add_parser("validate", help="Check a config and list every violation")
    p_val.add_argument("config", type=Path, help="Experiment config (JSON)")

    p_rep = sub.add_parser("report", help="Render comparison, accuracy and convergence tables for a results directory")
    p_rep.add_argument("results_dir", type=Path, help="Directory written by 'run'")
    p_rep.add_argument("--format", choices=REPORT_FORMATS, default="markdown", help="Report format (default markdown)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    load_env()
    logging.basicConfig(
        level=get_log_level(),
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    if args.command == "run":
        return _run_experiment_mode(args.config, args.jobs, args.out)
    if args.command == "validate":
        return _run_validate_mode(args.config)
    return _run_report_mode(args.results_dir, args.format)


def _run_experiment_mode(config_path: Path, jobs: int, out: Path | None) -> int:
    if jobs < 1:
        logger.error("--jobs must be >= 1, got %d", jobs)
        return EXIT_INVALID
    outcome = run_experiment(config_path, jobs=jobs, out=out)
    for line in outcome.tally_lines:
        print(line)
    if outcome.output_dir is not None:
        logger.info("Output: %s", outcome.output_dir)
    return outcome.exit_code


def _run_validate_mode(config_path: Path) -> int:
    violations = validate_config(config_path)
    if violations:
        logger.error("%s: %d violation(s)", config_path, len(violations))
        for v in violations:
            logger.error("  %s", v)
        return EXIT_INVALID
    logger.info("%s: ok", config_path)
    return EXIT_OK


def _run_report_mode(results_dir: Path, fmt: str) -> int:
    try:
        paths = emit_report(results_dir, fmt)
    except FileNotFoundError as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except (OSError, ValueError) as e:
        logger.error("Report failed: %s", e)
        return EXIT_RUN_FAILED
    for p in paths:
        logger.info("Wrote %s", p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
