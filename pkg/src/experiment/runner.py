"""
Experiment runner: expand a config into (method, problem, run) cells, execute
them (optionally in worker processes), write one JSON + convergence CSV per
cell, then a summary pass over everything that finished.

Layout of an output directory:

    experiment.json                       config + resolved problem/method ids
    runs/<problem>/<method>/run_000.json  RunRecord (or failure record)
    runs/<problem>/<method>/run_000_convergence.csv
    summary.csv                           one row per (problem, method)
    metadata.json                         timestamps, versions, job count
    report/                               emit_report output
"""
from __future__ import annotations

import json
import logging
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from functools import lru_cache
from importlib import metadata as importlib_metadata
from pathlib import Path
from typing import Any

import pandas as pd

from ..benchfn import make_function
from ..config import get_default_output_dir, get_output_dir
from ..dataio import (
    CsvSchema,
    Dataset,
    covid_preprocess,
    load_builtin,
    load_csv,
    make_dominant_feature_dataset,
    normalize_minmax,
    write_synthetic_covid_csv,
)
from ..evalstats import RunBatch, build_comparison_table, summary_row
from ..featsel import FeatureMask, run_feature_selection
from ..optimizer import run
from ..stochastic import SeededRng, derive_seed
from .config import (
    ExperimentConfig,
    ProblemSpec,
    build_fs_config,
    load_config,
    method_optimizer_config,
    resolve_data_path,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUN_FAILED = 2

_VERSIONED_PACKAGES = ("numpy", "scipy", "scikit-learn", "pandas")


@dataclass(frozen=True)
class RunCell:
    method: str
    problem: str
    run: int
    seed: int
    fold_seed: int | None = None

    @property
    def stem(self) -> str:
        return f"run_{self.run:03d}"

    def relative_dir(self) -> Path:
        return Path("runs") / self.problem / self.method


@dataclass
class ExperimentOutcome:
    exit_code: int
    output_dir: Path | None = None
    tally_lines: list[str] = field(default_factory=list)
    failures: int = 0
    errors: list[str] = field(default_factory=list)


def plan_cells(config: ExperimentConfig) -> list[RunCell]:
    """
    Cells in (problem, method, run) order. Seeds hash the ids, so adding a
    method or problem leaves the seeds of existing cells untouched.
    """
    cells: list[RunCell] = []
    for problem in config.problems:
        fold_seed = None
        if config.mode == "feature_selection" and config.fs.shared_folds:
            fold_seed = derive_seed(config.master_seed, "folds", problem.id)
        for method in config.methods:
            for r in range(config.runs):
                cells.append(RunCell(
                    method=method.id,
                    problem=problem.id,
                    run=r,
                    seed=derive_seed(config.master_seed, method.id, problem.id, r),
                    fold_seed=fold_seed,
                ))
    return cells


def resolve_output_dir(config: ExperimentConfig, out: Path | str | None = None) -> Path:
    """--out, then SSA_OUTPUT_DIR, then the config's output_dir, then output/<name>."""
    if out is not None:
        return Path(out)
    env_dir = get_output_dir()
    if env_dir is not None:
        return env_dir / config.name
    if config.output_dir:
        p = Path(config.output_dir).expanduser()
        if not p.is_absolute() and config.source:
            p = Path(config.source).resolve().parent / p
        return p
    return get_default_output_dir() / config.name


def prepare_problems(config: ExperimentConfig, out_dir: Path) -> ExperimentConfig:
    """
    Resolve dataset paths to absolute ones and write generated fixtures, so
    worker processes only read files. A missing COVID-19 file with
    "fallback": "synthetic" is replaced by the bundled fixture.
    """
    config_dir = Path(config.source).resolve().parent if config.source else None
    fixtures = out_dir / "fixtures"
    problems: list[ProblemSpec] = []
    for p in config.problems:
        params = dict(p.params)
        kind = p.kind
        if kind in ("csv", "covid"):
            path = resolve_data_path(str(params["path"]), config_dir)
            if kind == "covid" and not path.is_file() and params.get("fallback") == "synthetic":
                logger.warning("COVID-19 file %s not found; using the synthetic fixture", path)
                path = write_synthetic_covid_csv(
                    fixtures / f"{p.id}_covid.csv",
                    n_samples=int(params.get("n_samples", 200)),
                    seed=int(params.get("seed", 0)),
                )
                params["synthetic"] = True
            params["path"] = str(path.resolve())
        elif kind == "synthetic" and params.get("generator") == "covid":
            path = write_synthetic_covid_csv(
                fixtures / f"{p.id}_covid.csv",
                n_samples=int(params.get("n_samples", 200)),
                seed=int(params.get("seed", 0)),
            )
            kind = "covid"
            params["path"] = str(path.resolve())
            params["synthetic"] = True
        problems.append(ProblemSpec(id=p.id, kind=kind, params=params))
    return replace(config, problems=tuple(problems))


@lru_cache(maxsize=32)
def _load_dataset_cached(problem_id: str, kind: str, params_json: str) -> Dataset:
    params = json.loads(params_json)
    if kind == "builtin":
        ds = load_builtin(params["name"])
    elif kind == "csv":
        ds = load_csv(params["path"], CsvSchema.from_dict(params.get("schema", {})), name=problem_id)
    elif kind == "covid":
        ds = covid_preprocess(params["path"], target=params.get("target"), delimiter=params.get("delimiter", ","))
    elif kind == "synthetic":
        ds = make_dominant_feature_dataset(
            n_samples=int(params.get("n_samples", 200)),
            n_features=int(params.get("n_features", 10)),
            dominant_index=int(params.get("dominant_index", 0)),
            seed=int(params.get("seed", 0)),
            noise=float(params.get("noise", 0.05)),
        )
    else:
        raise ValueError(f"problem {problem_id!r} of kind {kind!r} is not a dataset")
    if params.get("normalize", True):
        ds = normalize_minmax(ds)
    return ds


def load_problem_dataset(problem: ProblemSpec) -> Dataset:
    """Dataset for a prepared problem; cached per process."""
    return _load_dataset_cached(problem.id, problem.kind, json.dumps(problem.params, sort_keys=True))


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, default=str), encoding="utf-8")


def _write_convergence(path: Path, history: list[float]) -> None:
    frame = pd.DataFrame({"iteration": range(len(history)), "best_fitness": history})
    frame.to_csv(path, index=False, float_format="%.17g")


def _execute_cell(config: ExperimentConfig, cell: RunCell) -> dict[str, Any]:
    problem = config.problem(cell.problem)
    method = config.method(cell.method)
    if config.mode == "benchmark":
        p = problem.params
        obj = make_function(
            str(p["family"]),
            int(p["dim"]),
            int(p.get("seed", 0)),
            rotate=bool(p.get("rotate", True)),
            shift=bool(p.get("shift", True)),
        )
        opt_cfg = method_optimizer_config(config, method, problem)
        record = run(obj, opt_cfg, SeededRng(cell.seed))
        return {
            "objective": obj.name,
            "optimizer": opt_cfg.to_dict(),
            "record": record.to_dict(),
        }
    ds = load_problem_dataset(problem)
    fs_cfg = build_fs_config(config, method, problem, ds.n_features)
    result = run_feature_selection(ds, fs_cfg, cell.seed, fold_seed=cell.fold_seed)
    return {
        "dataset": ds.describe(),
        "feature_names": list(ds.feature_names),
        "fs": fs_cfg.to_dict(),
        "selection": result.to_dict(),
        "record": result.record.to_dict(),
    }


def run_cell(config: ExperimentConfig, cell: RunCell, out_dir: Path) -> dict[str, Any]:
    """
    Execute one cell and write its files. Never raises: a failing cell
    produces a failure record with the exception type and message.
    """
    t0 = time.perf_counter()
    cell_dir = out_dir / cell.relative_dir()
    base: dict[str, Any] = {
        "method": cell.method,
        "problem": cell.problem,
        "run": cell.run,
        "seed": cell.seed,
        "fold_seed": cell.fold_seed,
    }
    try:
        payload = {**base, "status": "ok", **_execute_cell(config, cell)}
    except Exception as e:
        logger.error("Run %s/%s/%d failed: %s: %s", cell.problem, cell.method, cell.run, type(e).__name__, e)
        payload = {**base, "status": "failed", "error_type": type(e).__name__, "message": str(e)}
        _write_json(cell_dir / f"{cell.stem}.json", payload)
        return payload
    _write_json(cell_dir / f"{cell.stem}.json", payload)
    _write_convergence(cell_dir / f"{cell.stem}_convergence.csv", payload["record"]["history"])
    logger.info(
        "Run %s/%s/%d: best=%.6g (%.2fs)",
        cell.problem, cell.method, cell.run, payload["record"]["best_fitness"], time.perf_counter() - t0,
    )
    return payload


def batches_from_records(records: list[dict[str, Any]]) -> list[RunBatch]:
    """Group completed records by (problem, method), keeping first-seen order."""
    grouped: dict[tuple[str, str], list[dict[str, Any]]] = {}
    for rec in records:
        if rec.get("status") != "ok":
            continue
        grouped.setdefault((rec["problem"], rec["method"]), []).append(rec)
    batches: list[RunBatch] = []
    for (problem, method), recs in grouped.items():
        recs = sorted(recs, key=lambda r: r["run"])
        selections = [r["selection"] for r in recs if "selection" in r]
        batches.append(RunBatch(
            method=method,
            problem=problem,
            values=[float(r["record"]["best_fitness"]) for r in recs],
            accuracies=[float(s["accuracy"]) for s in selections],
            masks=[FeatureMask(tuple(int(b) for b in s["mask"])) for s in selections],
            n_features=int(selections[0]["n_features"]) if selections else None,
            histories=[list(r["record"]["history"]) for r in recs],
        ))
    return batches


def write_summary(batches: list[RunBatch], path: Path) -> pd.DataFrame:
    frame = pd.DataFrame([summary_row(b) for b in batches])
    frame.to_csv(path, index=False, float_format="%.10g")
    return frame


def _package_versions() -> dict[str, str]:
    out = {"python": platform.python_version()}
    for name in _VERSIONED_PACKAGES:
        try:
            out[name] = importlib_metadata.version(name)
        except importlib_metadata.PackageNotFoundError:
            out[name] = "unknown"
    return out


def _experiment_manifest(config: ExperimentConfig) -> dict[str, Any]:
    return {
        "name": config.name,
        "mode": config.mode,
        "runs": config.runs,
        "master_seed": config.master_seed,
        "problems": [p.id for p in config.problems],
        "methods": [m.id for m in config.methods],
        "comparisons": [list(c) for c in config.comparisons],
        "report_formats": list(config.report_formats),
        "config": config.raw,
    }


def _execute_cells(config: ExperimentConfig, cells: list[RunCell], out_dir: Path, jobs: int) -> list[dict[str, Any]]:
    if jobs <= 1:
        return [run_cell(config, cell, out_dir) for cell in cells]
    results: list[dict[str, Any]] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_cell, config, cell, out_dir) for cell in cells]
        for cell, fut in zip(cells, futures):
            try:
                results.append(fut.result())
            except Exception as e:
                # worker died or the cell could not be pickled
                logger.error("Run %s/%s/%d crashed: %s", cell.problem, cell.method, cell.run, e)
                payload = {
                    "method": cell.method,
                    "problem": cell.problem,
                    "run": cell.run,
                    "seed": cell.seed,
                    "fold_seed": cell.fold_seed,
                    "status": "failed",
                    "error_type": type(e).__name__,
                    "message": str(e),
                }
                _write_json(out_dir / cell.relative_dir() / f"{cell.stem}.json", payload)
                results.append(payload)
    return results


def run_experiment(config_path: Path | str, jobs: int = 1, out: Path | str | None = None) -> ExperimentOutcome:
    """
    Validate, run every cell, write summary.csv, the comparison tallies and
    the configured report formats. Exit code 1 on an invalid config, 2 when
    any cell failed, 0 otherwise.
    """
    from .report import emit_report

    try:
        config = load_config(config_path)
    except ValueError as e:
        logger.error("%s", e)
        return ExperimentOutcome(exit_code=EXIT_INVALID, errors=[line.strip() for line in str(e).splitlines()[1:]])

    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    out_dir = resolve_output_dir(config, out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = prepare_problems(config, out_dir)
    _write_json(out_dir / "experiment.json", _experiment_manifest(config))

    cells = plan_cells(config)
    logger.info(
        "Experiment %s: %d problem(s) x %d method(s) x %d run(s) = %d cells, jobs=%d -> %s",
        config.name, len(config.problems), len(config.methods), config.runs, len(cells), jobs, out_dir,
    )
    records = _execute_cells(config, cells, out_dir, max(1, jobs))
    failures = sum(1 for r in records if r.get("status") != "ok")

    batches = batches_from_records(records)
    outcome = ExperimentOutcome(exit_code=EXIT_OK, output_dir=out_dir, failures=failures)
    if batches:
        write_summary(batches, out_dir / "summary.csv")
        for baseline, challenger in config.comparisons:
            try:
                table = build_comparison_table(batches, baseline, challenger)
            except ValueError as e:
                logger.warning("No comparison %s vs %s: %s", challenger, baseline, e)
                continue
            outcome.tally_lines.append(f"{challenger} vs {baseline} (+/-/=): {table.tally_line}")
        for fmt in config.report_formats:
            try:
                emit_report(out_dir, fmt)
            except (OSError, ValueError) as e:
                logger.warning("Report %s failed: %s", fmt, e)
    else:
        logger.error("No run completed; summary not written")

    _write_json(out_dir / "metadata.json", {
        "started": started.isoformat(),
        "finished": datetime.now(timezone.utc).isoformat(),
        "elapsed_seconds": round(time.perf_counter() - t0, 3),
        "jobs": jobs,
        "cells": len(cells),
        "failed_cells": failures,
        "versions": _package_versions(),
    })
    if failures:
        logger.error("%d of %d run(s) failed; see the failure records under %s", failures, len(cells), out_dir / "runs")
        outcome.exit_code = EXIT_RUN_FAILED
    logger.info("Experiment %s done in %.2fs", config.name, time.perf_counter() - t0)
    return outcome
