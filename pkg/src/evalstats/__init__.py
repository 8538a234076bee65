"""Evaluation: run statistics, Wilcoxon rank-sum test, comparison tables."""
from .summary import (
    FitnessSummary,
    RunBatch,
    SelectionSize,
    avg_selection_size,
    classification_avg_accuracy,
    feature_frequency,
    mean_convergence,
    summarize,
    summary_row,
)
from .wilcoxon import EXACT_MAX_TOTAL, WilcoxonOutcome, wilcoxon_ranksum
from .tables import ComparisonRow, ComparisonTable, build_comparison_table

__all__ = [
    "FitnessSummary",
    "RunBatch",
    "SelectionSize",
    "avg_selection_size",
    "classification_avg_accuracy",
    "feature_frequency",
    "mean_convergence",
    "summarize",
    "summary_row",
    "EXACT_MAX_TOTAL",
    "WilcoxonOutcome",
    "wilcoxon_ranksum",
    "ComparisonRow",
    "ComparisonTable",
    "build_comparison_table",
]
