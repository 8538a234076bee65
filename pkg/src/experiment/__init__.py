"""Experiment layer: JSON config validation, batch runner, report rendering."""
from .config import (
    MODES,
    REPORT_FORMATS,
    BudgetSpec,
    ExperimentConfig,
    FsSettings,
    MethodSpec,
    ProblemSpec,
    load_config,
    parse_config,
    validate_config,
)
from .runner import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_RUN_FAILED,
    ExperimentOutcome,
    RunCell,
    plan_cells,
    run_cell,
    run_experiment,
)
from .report import ResultSet, emit_report, load_results

__all__ = [
    "MODES",
    "REPORT_FORMATS",
    "BudgetSpec",
    "ExperimentConfig",
    "FsSettings",
    "MethodSpec",
    "ProblemSpec",
    "load_config",
    "parse_config",
    "validate_config",
    "EXIT_INVALID",
    "EXIT_OK",
    "EXIT_RUN_FAILED",
    "ExperimentOutcome",
    "RunCell",
    "plan_cells",
    "run_cell",
    "run_experiment",
    "ResultSet",
    "emit_report",
    "load_results",
]
