"""
Per-(problem, method) statistics over M independent runs: best, worst, mean,
sample std, classification average accuracy and average selection size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence, TypedDict

import numpy as np

from ..featsel import FeatureMask


class FitnessSummary(TypedDict):
    best: float
    worst: float
    mean: float
    std: float | None


class SelectionSize(TypedDict):
    avg_count: float
    avg_ratio: float


@dataclass
class RunBatch:
    method: str
    problem: str
    values: list[float]
    accuracies: list[float] = field(default_factory=list)
    masks: list[FeatureMask] = field(default_factory=list)
    n_features: int | None = None
    histories: list[list[float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError(f"empty run batch for {self.method} on {self.problem}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"non-finite fitness in run batch for {self.method} on {self.problem}")

    @property
    def runs(self) -> int:
        return len(self.values)


def summarize(batch: RunBatch | Sequence[float], require_std: bool = True) -> FitnessSummary:
    """min / max / mean / std with an M - 1 denominator. M = 1 has no std."""
    values = np.asarray(batch.values if isinstance(batch, RunBatch) else batch, dtype=float)
    if values.size == 0:
        raise ValueError("cannot summarize an empty batch")
    if values.size < 2 and require_std:
        raise ValueError("standard deviation needs at least 2 runs")
    return FitnessSummary(
        best=float(values.min()),
        worst=float(values.max()),
        mean=float(values.mean()),
        std=float(values.std(ddof=1)) if values.size >= 2 else None,
    )


def classification_avg_accuracy(match_counts: Sequence[int], n_points: int, m_runs: int) -> float:
    """Mean over runs of (correct predictions / n_points)."""
    if len(match_counts) != m_runs:
        raise ValueError(f"{len(match_counts)} match counts for {m_runs} runs")
    if n_points < 1 or m_runs < 1:
        raise ValueError("n_points and m_runs must be >= 1")
    counts = np.asarray(match_counts, dtype=float)
    if np.any((counts < 0) | (counts > n_points)):
        raise ValueError(f"match counts must lie in [0, {n_points}]")
    return float(np.mean(counts / n_points))


def avg_selection_size(masks: Sequence[FeatureMask], dim: int) -> SelectionSize:
    if not masks:
        raise ValueError("no masks to average")
    if any(len(m) != dim for m in masks):
        raise ValueError(f"all masks must have {dim} bits")
    counts = np.array([m.selected_count for m in masks], dtype=float)
    return SelectionSize(avg_count=float(counts.mean()), avg_ratio=float(np.mean(counts / dim)))


def feature_frequency(masks: Sequence[FeatureMask], feature_names: Sequence[str]) -> dict[str, float]:
    """Fraction of runs that selected each feature."""
    if not masks:
        return {str(n): 0.0 for n in feature_names}
    bits = np.array([m.bits for m in masks], dtype=float)
    return {str(n): float(v) for n, v in zip(feature_names, bits.mean(axis=0))}


def mean_convergence(histories: Sequence[Sequence[float]]) -> list[float]:
    """Pointwise mean; shorter histories are padded with their final value."""
    if not histories:
        return []
    length = max(len(h) for h in histories)
    padded = np.array([list(h) + [h[-1]] * (length - len(h)) for h in histories], dtype=float)
    return [float(v) for v in padded.mean(axis=0)]


def summary_row(batch: RunBatch) -> dict[str, Any]:
    stats = summarize(batch, require_std=False)
    row: dict[str, Any] = {
        "problem": batch.problem,
        "method": batch.method,
        "runs": batch.runs,
        **stats,
    }
    if batch.accuracies:
        row["accuracy"] = float(np.mean(batch.accuracies))
    if batch.masks and batch.n_features:
        size = avg_selection_size(batch.masks, batch.n_features)
        row["avg_features"] = size["avg_count"]
        row["avg_ratio"] = size["avg_ratio"]
    return row
