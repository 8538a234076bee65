"""Tests for src.evalstats: run summaries, the rank-sum test and comparison tables."""
from __future__ import annotations

import itertools

import numpy as np
import pytest
from scipy.stats import mannwhitneyu, rankdata

from src.evalstats import (
    EXACT_MAX_TOTAL,
    RunBatch,
    avg_selection_size,
    build_comparison_table,
    classification_avg_accuracy,
    feature_frequency,
    mean_convergence,
    summarize,
    summary_row,
    wilcoxon_ranksum,
)
from src.featsel import FeatureMask
from src.stochastic import SeededRng


def _brute_two_sided(a: list[float], b: list[float]) -> float:
    """Enumerate every split of the pooled ranks 1..n+m (no ties)."""
    n, total = len(a), len(a) + len(b)
    pooled = sorted(a + b)
    observed = sum(pooled.index(v) + 1 for v in a)
    mu = n * (total + 1) / 2.0
    sums = [sum(c) for c in itertools.combinations(range(1, total + 1), n)]
    return sum(abs(s - mu) >= abs(observed - mu) for s in sums) / len(sums)


# --- summaries ---


def test_summarize_example() -> None:
    s = summarize([4.0, 1.0, 3.0, 2.0])
    assert s["best"] == 1.0 and s["worst"] == 4.0 and s["mean"] == 2.5
    assert s["std"] == pytest.approx(1.2909944487358056, rel=1e-12)


def test_summarize_single_run() -> None:
    with pytest.raises(ValueError, match="at least 2 runs"):
        summarize([1.0])
    assert summarize([1.0], require_std=False)["std"] is None
    with pytest.raises(ValueError, match="empty"):
        summarize([])


def test_run_batch_rejects_bad_values() -> None:
    with pytest.raises(ValueError, match="empty"):
        RunBatch("SSA", "p", [])
    with pytest.raises(ValueError, match="non-finite"):
        RunBatch("SSA", "p", [1.0, float("nan")])


def test_classification_avg_accuracy() -> None:
    assert classification_avg_accuracy([90, 95, 100], 100, 3) == pytest.approx(0.95)
    with pytest.raises(ValueError):
        classification_avg_accuracy([90, 95], 100, 3)
    with pytest.raises(ValueError):
        classification_avg_accuracy([101], 100, 1)


def test_selection_size_and_frequency() -> None:
    masks = [FeatureMask((1, 0, 0, 1)), FeatureMask((1, 1, 0, 0)), FeatureMask((1, 0, 0, 0))]
    size = avg_selection_size(masks, 4)
    assert size["avg_count"] == pytest.approx(5 / 3)
    assert size["avg_ratio"] == pytest.approx(5 / 12)
    freq = feature_frequency(masks, ["a", "b", "c", "d"])
    assert freq == pytest.approx({"a": 1.0, "b": 1 / 3, "c": 0.0, "d": 1 / 3})
    assert feature_frequency([], ["a"]) == {"a": 0.0}
    with pytest.raises(ValueError):
        avg_selection_size(masks, 5)


def test_mean_convergence_pads_short_histories() -> None:
    assert mean_convergence([[4.0, 2.0, 1.0], [6.0, 3.0]]) == [5.0, 2.5, 2.0]
    assert mean_convergence([]) == []


def test_summary_row_for_selection_batch() -> None:
    batch = RunBatch(
        "TFSSA", "wine", [0.1, 0.2],
        accuracies=[0.9, 0.8],
        masks=[FeatureMask((1, 0)), FeatureMask((1, 1))],
        n_features=2,
    )
    row = summary_row(batch)
    assert row["problem"] == "wine" and row["runs"] == 2
    assert row["accuracy"] == pytest.approx(0.85)
    assert row["avg_features"] == pytest.approx(1.5)
    assert row["avg_ratio"] == pytest.approx(0.75)


# --- rank-sum test ---


def test_exact_p_matches_scipy_and_enumeration() -> None:
    rng = SeededRng(31)
    for n in range(3, 9):
        for m in range(3, 9):
            a = [float(v) for v in rng.normal(0.0, 1.0, n)]
            b = [float(v) for v in rng.normal(0.7, 1.0, m)]
            out = wilcoxon_ranksum(a, b)
            assert out.method == "exact"
            ref = mannwhitneyu(a, b, alternative="two-sided", method="exact").pvalue
            assert out.p_exact == pytest.approx(ref, rel=1e-9, abs=1e-12)
            assert out.p_exact == pytest.approx(_brute_two_sided(a, b), abs=1e-12)


def _brute_two_sided_midranks(a: list[float], b: list[float]) -> float:
    """Enumerate every size-n subset of the pooled midranks (ties allowed)."""
    n = len(a)
    ranks = rankdata(a + b)
    mu = n * (len(ranks) + 1) / 2.0
    observed = abs(ranks[:n].sum() - mu)
    hits = total = 0
    for idx in itertools.combinations(range(len(ranks)), n):
        total += 1
        hits += abs(ranks[list(idx)].sum() - mu) >= observed - 1e-9
    return hits / total


def test_worked_example_three_each() -> None:
    out = wilcoxon_ranksum([1.0, 2.0, 3.0], [10.0, 11.0, 12.0])
    assert out.method == "exact"
    assert out.p_exact == pytest.approx(0.1, abs=1e-12)
    assert out.p_value == pytest.approx(0.1, abs=1e-12)
    assert out.verdict == "="


def test_exact_p_with_heavy_ties_matches_enumeration() -> None:
    rng = SeededRng(17)
    for _ in range(200):
        n, m = (int(v) for v in rng.integers(3, 9, 2))
        a = [float(v) for v in rng.integers(0, 4, n)]
        b = [float(v) for v in rng.integers(0, 4, m)]
        out = wilcoxon_ranksum(a, b)
        assert out.p_exact == pytest.approx(_brute_two_sided_midranks(a, b), abs=1e-12)


def test_approximation_close_to_exact_at_eight_each() -> None:
    rng = SeededRng(5)
    for _ in range(20):
        a = [float(v) for v in rng.normal(0.0, 1.0, 8)]
        b = [float(v) for v in rng.normal(0.5, 1.0, 8)]
        out = wilcoxon_ranksum(a, b)
        assert abs(out.p_exact - out.p_approx) <= 0.02


def test_large_samples_use_tie_corrected_approximation() -> None:
    rng = SeededRng(9)
    a = [float(v) for v in np.round(rng.normal(0.0, 1.0, 30), 1)]
    b = [float(v) for v in np.round(rng.normal(0.4, 1.0, 30), 1)]
    out = wilcoxon_ranksum(a, b)
    assert len(a) + len(b) > EXACT_MAX_TOTAL
    assert out.method == "approx" and out.p_exact is None
    ref = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True).pvalue
    assert out.p_value == pytest.approx(ref, rel=1e-9)


def test_verdict_is_from_the_challenger_side() -> None:
    better = [0.1, 0.2, 0.15, 0.12, 0.11, 0.13, 0.14, 0.16, 0.18, 0.19]
    worse = [1.1, 1.2, 1.15, 1.12, 1.11, 1.13, 1.14, 1.16, 1.18, 1.19]
    plus = wilcoxon_ranksum(better, worse)
    minus = wilcoxon_ranksum(worse, better)
    assert (plus.verdict, minus.verdict) == ("+", "-")
    assert plus.p_value == pytest.approx(minus.p_value, rel=1e-12)
    assert plus.p_value < 0.05
    assert plus.p_one_sided < 0.05 < minus.p_one_sided


def test_overlapping_samples_are_equal() -> None:
    out = wilcoxon_ranksum([1.0, 2.0, 3.0, 4.0], [1.5, 2.5, 3.5, 4.5])
    assert out.verdict == "="
    assert out.p_value > 0.05


def test_degenerate_samples() -> None:
    out = wilcoxon_ranksum([2.0] * 5, [2.0] * 5)
    assert (out.verdict, out.p_value, out.method) == ("=", 1.0, "degenerate")


def test_rank_sum_needs_three_values() -> None:
    with pytest.raises(ValueError, match="at least 3"):
        wilcoxon_ranksum([1.0, 2.0], [1.0, 2.0, 3.0])


# --- comparison tables ---


def _batches() -> list[RunBatch]:
    low = [0.1, 0.2, 0.15, 0.12, 0.11]
    high = [5.1, 5.2, 5.15, 5.12, 5.11]
    mid = [1.0, 2.0, 3.0, 4.0, 5.0]
    return [
        RunBatch("SSA", "f1", high), RunBatch("SSA", "f2", low), RunBatch("SSA", "f3", mid),
        RunBatch("TFSSA", "f1", low), RunBatch("TFSSA", "f2", high), RunBatch("TFSSA", "f3", list(reversed(mid))),
    ]


def test_comparison_table_tally() -> None:
    table = build_comparison_table(_batches(), baseline="SSA", challenger="TFSSA")
    assert [r.problem for r in table.rows] == ["f1", "f2", "f3"]
    assert [r.verdict for r in table.rows] == ["+", "-", "="]
    assert table.tally == {"+": 1, "-": 1, "=": 1}
    assert table.tally_line == "1/1/1"
    row = table.to_dict()["rows"][0]
    assert row["baseline_mean"] == pytest.approx(5.136)
    assert row["method"] == "exact" and "p_exact" in row


def test_comparison_table_problem_mismatch() -> None:
    batches = _batches()[:-1]
    with pytest.raises(ValueError, match="different problems"):
        build_comparison_table(batches, baseline="SSA", challenger="TFSSA")
    with pytest.raises(ValueError, match="no batches"):
        build_comparison_table(batches, baseline="SSA", challenger="GWO")


def test_comparison_with_too_few_runs_is_equal() -> None:
    batches = [RunBatch("SSA", "f1", [9.0, 9.5]), RunBatch("TFSSA", "f1", [0.1, 0.2])]
    table = build_comparison_table(batches, baseline="SSA", challenger="TFSSA")
    assert table.rows[0].verdict == "="
    assert table.rows[0].test is None
