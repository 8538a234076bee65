"""
Two-sided Wilcoxon rank-sum test with midranks. Exact null distribution by
enumerating rank assignments when n + m <= 16, tie-corrected normal
approximation with continuity correction otherwise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
from scipy.stats import norm, rankdata, tiecorrect

EXACT_MAX_TOTAL = 16
ALPHA = 0.05
_TOL = 1e-9


@dataclass(frozen=True)
class WilcoxonOutcome:
    statistic: float
    p_value: float
    verdict: str
    p_exact: float | None = None
    p_approx: float = 1.0
    p_one_sided: float = 1.0
    method: str = "approx"

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "p_exact": self.p_exact,
            "p_approx": self.p_approx,
            "p_one_sided": self.p_one_sided,
            "method": self.method,
            "verdict": self.verdict,
        }


@lru_cache(maxsize=256)
def _null_sums(ranks: tuple[float, ...], n: int) -> np.ndarray:
    """Rank sums of every size-n subset of the pooled ranks."""
    combos = np.array(list(itertools.combinations(ranks, n)), dtype=float)
    return combos.sum(axis=1)


def exact_p_values(ranks: np.ndarray, n: int, statistic: float) -> tuple[float, float]:
    """(two-sided, one-sided 'first sample smaller') p from the full enumeration."""
    total = len(ranks)
    mu = n * (total + 1) / 2.0
    sums = _null_sums(tuple(sorted(float(r) for r in ranks)), n)
    two = float(np.mean(np.abs(sums - mu) >= abs(statistic - mu) - _TOL))
    one = float(np.mean(sums <= statistic + _TOL))
    return two, one


def approx_p_values(ranks: np.ndarray, n: int, m: int, statistic: float) -> tuple[float, float]:
    total = n + m
    mu = n * (total + 1) / 2.0
    var = n * m * (total + 1) / 12.0 * tiecorrect(ranks)
    if var <= 0.0:
        return 1.0, 1.0
    sd = np.sqrt(var)
    dev = abs(statistic - mu)
    two = min(1.0, 2.0 * float(norm.sf(max(dev - 0.5, 0.0) / sd)))
    one = float(norm.cdf((statistic - mu + 0.5) / sd))
    return two, one


def wilcoxon_ranksum(a: Sequence[float], b: Sequence[float], alpha: float = ALPHA) -> WilcoxonOutcome:
    """
    a is the challenger, b the baseline (minimisation). Verdict '+' when the
    difference is significant and a has the lower mean, '-' when significant
    and a has the higher mean, '=' otherwise.
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if len(x) < 3 or len(y) < 3:
        raise ValueError(f"rank-sum test needs at least 3 values per sample, got {len(x)} and {len(y)}")
    pooled = np.concatenate([x, y])
    ranks = rankdata(pooled)
    n, m = len(x), len(y)
    statistic = float(ranks[:n].sum())
    if np.all(pooled == pooled[0]):
        return WilcoxonOutcome(statistic=statistic, p_value=1.0, verdict="=", p_exact=1.0, p_approx=1.0,
                               p_one_sided=1.0, method="degenerate")

    p_approx, one_approx = approx_p_values(ranks, n, m, statistic)
    p_exact: float | None = None
    if n + m <= EXACT_MAX_TOTAL:
        p_exact, one_sided = exact_p_values(ranks, n, statistic)
        p_value, method = p_exact, "exact"
    else:
        one_sided = one_approx
        p_value, method = p_approx, "approx"

    verdict = "="
    if p_value < alpha:
        if x.mean() < y.mean():
            verdict = "+"
        elif x.mean() > y.mean():
            verdict = "-"
    return WilcoxonOutcome(
        statistic=statistic,
        p_value=p_value,
        verdict=verdict,
        p_exact=p_exact,
        p_approx=p_approx,
        p_one_sided=one_sided,
        method=method,
    )
