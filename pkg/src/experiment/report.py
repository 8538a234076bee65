"""
Render a results directory as csv, json or markdown under <results_dir>/report/.
Missing, corrupt and failed run files are listed rather than aborting.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import pandas as pd

from ..evalstats import (
    ComparisonTable,
    RunBatch,
    build_comparison_table,
    feature_frequency,
    mean_convergence,
    summary_row,
)
from .config import REPORT_FORMATS, default_comparisons
from .runner import batches_from_records

logger = logging.getLogger(__name__)

REPORT_DIR = "report"


@dataclass
class ResultSet:
    root: Path
    manifest: dict[str, Any]
    records: list[dict[str, Any]] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)
    corrupt: list[str] = field(default_factory=list)

    @property
    def completed(self) -> list[dict[str, Any]]:
        return [r for r in self.records if r.get("status") == "ok"]

    @property
    def failures(self) -> list[dict[str, Any]]:
        return [
            {k: r.get(k) for k in ("problem", "method", "run", "error_type", "message")}
            for r in self.records if r.get("status") != "ok"
        ]

    @property
    def feature_names(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for r in self.completed:
            if "feature_names" in r:
                out.setdefault(r["problem"], r["feature_names"])
        return out


def _load_record(path: Path) -> dict[str, Any]:
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict) or "status" not in data or "problem" not in data:
        raise ValueError("not a run record")
    if data["status"] == "ok" and "best_fitness" not in data.get("record", {}):
        raise ValueError("run record without best_fitness")
    return data


def load_results(results_dir: Path | str) -> ResultSet:
    root = Path(results_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"results directory not found: {root}")
    manifest: dict[str, Any] = {}
    corrupt: list[str] = []
    manifest_path = root / "experiment.json"
    if manifest_path.is_file():
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            corrupt.append(f"experiment.json: {e.msg}")
    else:
        logger.warning("No experiment.json in %s; expected runs are unknown", root)

    records: list[dict[str, Any]] = []
    found: set[str] = set()
    for path in sorted((root / "runs").glob("*/*/run_*.json")):
        rel = path.relative_to(root).as_posix()
        found.add(rel)
        try:
            records.append(_load_record(path))
        except (json.JSONDecodeError, ValueError, KeyError) as e:
            corrupt.append(f"{rel}: {e}")

    missing: list[str] = []
    if manifest:
        for problem in manifest.get("problems", []):
            for method in manifest.get("methods", []):
                for r in range(int(manifest.get("runs", 0))):
                    rel = f"runs/{problem}/{method}/run_{r:03d}.json"
                    if rel not in found:
                        missing.append(rel)
    for entry in missing + corrupt:
        logger.warning("Unusable run file: %s", entry)
    return ResultSet(root=root, manifest=manifest, records=records, missing=missing, corrupt=corrupt)


def _ordered_batches(results: ResultSet) -> list[RunBatch]:
    batches = batches_from_records(results.completed)
    problems = results.manifest.get("problems") or []
    methods = results.manifest.get("methods") or []

    def key(b: RunBatch) -> tuple[int, int]:
        p = problems.index(b.problem) if b.problem in problems else len(problems)
        m = methods.index(b.method) if b.method in methods else len(methods)
        return p, m

    return sorted(batches, key=key)


def _comparisons(results: ResultSet, batches: list[RunBatch]) -> list[ComparisonTable]:
    pairs = [tuple(c) for c in results.manifest.get("comparisons", [])]
    if not pairs:
        pairs = list(default_comparisons(list(dict.fromkeys(b.method for b in batches))))
    tables: list[ComparisonTable] = []
    for baseline, challenger in pairs:
        try:
            tables.append(build_comparison_table(batches, baseline, challenger))
        except ValueError as e:
            logger.warning("Skipping comparison %s vs %s: %s", challenger, baseline, e)
    return tables


def _convergence_frame(batches: list[RunBatch]) -> pd.DataFrame:
    rows = []
    for b in batches:
        for i, v in enumerate(mean_convergence(b.histories)):
            rows.append({"problem": b.problem, "method": b.method, "iteration": i, "mean_best_fitness": v})
    return pd.DataFrame(rows, columns=["problem", "method", "iteration", "mean_best_fitness"])


def _frequency_rows(results: ResultSet, batches: list[RunBatch]) -> list[dict[str, Any]]:
    names = results.feature_names
    rows = []
    for b in batches:
        if not b.masks or b.problem not in names:
            continue
        for feature, freq in feature_frequency(b.masks, names[b.problem]).items():
            rows.append({"problem": b.problem, "method": b.method, "feature": feature, "frequency": freq})
    return rows


def _comparison_rows(tables: list[ComparisonTable]) -> list[dict[str, Any]]:
    rows = []
    for t in tables:
        for r in t.rows:
            row = r.to_dict()
            rows.append({"baseline": t.baseline, "challenger": t.challenger, **row})
    return rows


def _write_csv(results: ResultSet, batches: list[RunBatch], tables: list[ComparisonTable], out: Path) -> list[Path]:
    paths = [out / "summary.csv", out / "comparison.csv", out / "convergence.csv"]
    pd.DataFrame([summary_row(b) for b in batches]).to_csv(paths[0], index=False, float_format="%.10g")
    comparison = pd.DataFrame(_comparison_rows(tables))
    keep = [c for c in comparison.columns if c not in ("p_exact", "p_approx", "p_one_sided", "method")]
    comparison[keep].to_csv(paths[1], index=False, float_format="%.10g")
    _convergence_frame(batches).to_csv(paths[2], index=False, float_format="%.10g")
    freq = _frequency_rows(results, batches)
    if freq:
        paths.append(out / "feature_frequency.csv")
        pd.DataFrame(freq).to_csv(paths[-1], index=False, float_format="%.10g")
    return paths


def _write_json(results: ResultSet, batches: list[RunBatch], tables: list[ComparisonTable], out: Path) -> list[Path]:
    payload = {
        "name": results.manifest.get("name"),
        "mode": results.manifest.get("mode"),
        "summary": [summary_row(b) for b in batches],
        "comparisons": [t.to_dict() for t in tables],
        "feature_frequency": _frequency_rows(results, batches),
        "convergence": [
            {"problem": b.problem, "method": b.method, "mean_best_fitness": mean_convergence(b.histories)}
            for b in batches
        ],
        "failures": results.failures,
        "missing": results.missing,
        "corrupt": results.corrupt,
    }
    path = out / "report.json"
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    return [path]


def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4e}" if value and (abs(value) >= 1e4 or abs(value) < 1e-3) else f"{value:.4f}"
    return str(value)


def markdown_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_fmt(v) for v in row) + " |")
    return "\n".join(lines)


def _mean_std(mean: float, std: float | None) -> str:
    return f"{_fmt(mean)} ({_fmt(std)})"


def _write_markdown(results: ResultSet, batches: list[RunBatch], tables: list[ComparisonTable], out: Path) -> list[Path]:
    title = results.manifest.get("name") or results.root.name
    parts = [f"# {title}", ""]

    parts += ["## Fitness", ""]
    parts.append(markdown_table(
        ["Problem", "Method", "Runs", "Best", "Worst", "Mean", "Std"],
        [[r["problem"], r["method"], r["runs"], r["best"], r["worst"], r["mean"], r["std"]]
         for r in (summary_row(b) for b in batches)],
    ))

    for t in tables:
        parts += ["", f"## {t.challenger} vs {t.baseline}", ""]
        parts.append(markdown_table(
            ["Problem", f"{t.baseline} mean (std)", f"{t.challenger} mean (std)", "p", "Verdict"],
            [[r.problem, _mean_std(r.baseline_mean, r.baseline_std), _mean_std(r.challenger_mean, r.challenger_std),
              r.test.p_value if r.test else None, r.verdict] for r in t.rows],
        ))
        parts += ["", f"+/-/=: {t.tally_line}"]

    fs_batches = [b for b in batches if b.accuracies]
    if fs_batches:
        methods = list(dict.fromkeys(b.method for b in fs_batches))
        problems = list(dict.fromkeys(b.problem for b in fs_batches))
        by_key = {(b.problem, b.method): summary_row(b) for b in fs_batches}
        for heading, column in (("Classification accuracy", "accuracy"), ("Selected features", "avg_features")):
            parts += ["", f"## {heading}", ""]
            parts.append(markdown_table(
                ["Problem", *methods],
                [[p, *(by_key.get((p, m), {}).get(column) for m in methods)] for p in problems],
            ))

    freq = _frequency_rows(results, batches)
    if freq:
        parts += ["", "## Feature selection frequency", ""]
        parts.append(markdown_table(
            ["Problem", "Method", "Feature", "Frequency"],
            [[r["problem"], r["method"], r["feature"], r["frequency"]] for r in freq if r["frequency"] > 0],
        ))

    problems_found = results.missing + results.corrupt
    if problems_found or results.failures:
        parts += ["", "## Unusable runs", ""]
        parts += [f"- missing: {m}" for m in results.missing]
        parts += [f"- corrupt: {c}" for c in results.corrupt]
        parts += [
            f"- failed: {f['problem']}/{f['method']}/run {f['run']}: {f['error_type']}: {f['message']}"
            for f in results.failures
        ]

    path = out / "report.md"
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return [path]


_WRITERS = {"csv": _write_csv, "json": _write_json, "markdown": _write_markdown}


def emit_report(results_dir: Path | str, fmt: str) -> list[Path]:
    """Write the report files for fmt and return their paths."""
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    results = load_results(results_dir)
    batches = _ordered_batches(results)
    if not batches:
        raise ValueError(f"no completed runs in {results.root}")
    tables = _comparisons(results, batches)
    out = results.root / REPORT_DIR
    out.mkdir(parents=True, exist_ok=True)
    paths = _WRITERS[fmt](results, batches, tables, out)
    logger.info("Report (%s): %s", fmt, ", ".join(p.name for p in paths))
    return paths
