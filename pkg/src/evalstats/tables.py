"""Baseline vs challenger comparison table with the +/-/= tally."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .summary import RunBatch, summarize
from .wilcoxon import WilcoxonOutcome, wilcoxon_ranksum


@dataclass
class ComparisonRow:
    problem: str
    baseline_mean: float
    baseline_std: float | None
    challenger_mean: float
    challenger_std: float | None
    verdict: str
    test: WilcoxonOutcome | None = None

    def to_dict(self) -> dict[str, Any]:
        row: dict[str, Any] = {
            "problem": self.problem,
            "baseline_mean": self.baseline_mean,
            "baseline_std": self.baseline_std,
            "challenger_mean": self.challenger_mean,
            "challenger_std": self.challenger_std,
            "verdict": self.verdict,
        }
        if self.test is not None:
            row.update({k: v for k, v in self.test.to_dict().items() if k != "verdict"})
        return row


@dataclass
class ComparisonTable:
    baseline: str
    challenger: str
    rows: list[ComparisonRow] = field(default_factory=list)

    @property
    def tally(self) -> dict[str, int]:
        out = {"+": 0, "-": 0, "=": 0}
        for row in self.rows:
            out[row.verdict] += 1
        return out

    @property
    def tally_line(self) -> str:
        """'+/-/=' counts, e.g. '6/2/2'."""
        t = self.tally
        return f"{t['+']}/{t['-']}/{t['=']}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "baseline": self.baseline,
            "challenger": self.challenger,
            "rows": [r.to_dict() for r in self.rows],
            "tally": self.tally,
            "tally_line": self.tally_line,
        }


def build_comparison_table(batches: Sequence[RunBatch], baseline: str, challenger: str) -> ComparisonTable:
    """
    One row per problem: mean(std) of both methods and the rank-sum verdict
    from the challenger's point of view. Problems with fewer than 3 runs on
    either side get '=' and no test.
    """
    base = {b.problem: b for b in batches if b.method == baseline}
    chal = {b.problem: b for b in batches if b.method == challenger}
    if not base or not chal:
        raise ValueError(f"no batches for {baseline!r} or {challenger!r}")
    if set(base) != set(chal):
        missing = sorted(set(base) ^ set(chal))
        raise ValueError(f"{baseline} and {challenger} cover different problems: {missing}")

    order = list(dict.fromkeys(b.problem for b in batches if b.method == baseline))
    table = ComparisonTable(baseline=baseline, challenger=challenger)
    for problem in order:
        bb, cb = base[problem], chal[problem]
        bs, cs = summarize(bb, require_std=False), summarize(cb, require_std=False)
        test = None
        verdict = "="
        if bb.runs >= 3 and cb.runs >= 3:
            test = wilcoxon_ranksum(cb.values, bb.values)
            verdict = test.verdict
        table.rows.append(ComparisonRow(
            problem=problem,
            baseline_mean=bs["mean"],
            baseline_std=bs["std"],
            challenger_mean=cs["mean"],
            challenger_std=cs["std"],
            verdict=verdict,
            test=test,
        ))
    return table
