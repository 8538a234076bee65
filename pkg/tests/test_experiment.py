"""Tests for src.experiment: config validation, the batch runner and report rendering."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pandas as pd
import pytest

from src.experiment import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_RUN_FAILED,
    emit_report,
    load_config,
    load_results,
    plan_cells,
    run_experiment,
    validate_config,
)
from src.experiment import runner as runner_module
from src.experiment.runner import resolve_output_dir


def _benchmark_config(**overrides: Any) -> dict[str, Any]:
    data: dict[str, Any] = {
        "name": "tiny",
        "mode": "benchmark",
        "runs": 3,
        "master_seed": 5,
        "budget": {"t_max": 8},
        "optimizer": {"n_sparrows": 6},
        "problems": [{"family": "sphere", "dim": 3}, {"family": "rastrigin", "dim": 3}],
        "methods": ["SSA", "TFSSA"],
        "report_formats": [],
    }
    data.update(overrides)
    return data


def _fs_config(**overrides: Any) -> dict[str, Any]:
    data: dict[str, Any] = {
        "name": "tiny_fs",
        "mode": "feature_selection",
        "runs": 3,
        "master_seed": 2,
        "budget": {"t_max": 5},
        "optimizer": {"n_sparrows": 5},
        "feature_selection": {"lambda": 0.99, "mu": 0.01, "k_neighbors": 3, "k_folds": 4},
        "problems": [{"kind": "synthetic", "name": "dominant", "n_samples": 40, "n_features": 4, "seed": 1}],
        "methods": ["SSA", "TFSSA"],
        "report_formats": [],
    }
    data.update(overrides)
    return data


def _write_config(tmp_path: Path, data: dict[str, Any], name: str = "exp.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return path


# --- validation ---


def test_well_formed_config_is_valid(tmp_path: Path) -> None:
    path = _write_config(tmp_path, _benchmark_config())
    assert validate_config(path) == []
    config = load_config(path)
    assert [p.id for p in config.problems] == ["sphere_D3", "rastrigin_D3"]
    assert config.comparisons == (("SSA", "TFSSA"),)


def test_runs_zero_is_reported(tmp_path: Path) -> None:
    errors = validate_config(_write_config(tmp_path, _benchmark_config(runs=0)))
    assert errors == ["runs: must be >= 1 (runs ≥ 1), got 0"]


def test_fitness_weights_must_sum_to_one(tmp_path: Path) -> None:
    cfg = _fs_config(feature_selection={"lambda": 0.9, "mu": 0.2})
    errors = validate_config(_write_config(tmp_path, cfg))
    assert any(e.startswith("feature_selection: fitness weights lambda + mu must equal 1") for e in errors)


def test_every_violation_is_listed(tmp_path: Path) -> None:
    cfg = _benchmark_config(
        runs=0,
        problems=[{"family": "himmelblau", "dim": 3}, {"family": "sphere", "dim": 1}],
        methods=[{"id": "SSA", "population": 5}],
        report_formats=["pdf"],
    )
    errors = validate_config(_write_config(tmp_path, cfg))
    assert "runs: must be >= 1 (runs ≥ 1), got 0" in errors
    assert "problems[0].family: unknown function family 'himmelblau'" in errors
    assert any(e.startswith("problems[1].dim: must be >= 2") for e in errors)
    assert "methods[0].population: unknown optimizer setting" in errors
    assert any(e.startswith("report_formats:") for e in errors)


def test_missing_dataset_file(tmp_path: Path) -> None:
    cfg = _fs_config(problems=[{"kind": "csv", "path": str(tmp_path / "absent.csv")}])
    errors = validate_config(_write_config(tmp_path, cfg))
    assert len(errors) == 1
    assert errors[0].startswith("problems[0].path: dataset file not found")


def test_covid_fallback_suppresses_missing_file(tmp_path: Path) -> None:
    problem = {"kind": "covid", "path": str(tmp_path / "covid19.csv")}
    assert validate_config(_write_config(tmp_path, _fs_config(problems=[problem])))
    problem["fallback"] = "synthetic"
    assert validate_config(_write_config(tmp_path, _fs_config(problems=[problem]))) == []


def test_invalid_json_and_missing_file(tmp_path: Path) -> None:
    bad = tmp_path / "bad.json"
    bad.write_text("{\"runs\": 3,", encoding="utf-8")
    assert validate_config(bad)[0].startswith("<file>: invalid JSON")
    assert validate_config(tmp_path / "nope.json")[0].startswith("<file>: config not found")
    with pytest.raises(ValueError, match="invalid experiment config"):
        load_config(bad)


def test_mode_and_problem_kind_must_agree(tmp_path: Path) -> None:
    cfg = _benchmark_config(problems=[{"kind": "builtin", "name": "wine"}])
    errors = validate_config(_write_config(tmp_path, cfg))
    assert "problems[0].kind: benchmark mode takes function problems, got 'builtin'" in errors


# --- planning ---


def test_plan_cells_order_and_seeds(tmp_path: Path) -> None:
    config = load_config(_write_config(tmp_path, _benchmark_config()))
    cells = plan_cells(config)
    assert len(cells) == 12
    assert [(c.problem, c.method, c.run) for c in cells[:4]] == [
        ("sphere_D3", "SSA", 0), ("sphere_D3", "SSA", 1), ("sphere_D3", "SSA", 2), ("sphere_D3", "TFSSA", 0),
    ]
    assert len({c.seed for c in cells}) == 12
    methods = ["SSA", "TFSSA", {"id": "SSA_C1", "variant": "SSA", "chaotic_init": True}]
    more = load_config(_write_config(tmp_path, _benchmark_config(methods=methods), "more.json"))
    assert plan_cells(more)[0].seed == cells[0].seed


def test_shared_folds_use_one_seed_per_problem(tmp_path: Path) -> None:
    cfg = _fs_config()
    cfg["feature_selection"]["shared_folds"] = True
    cells = plan_cells(load_config(_write_config(tmp_path, cfg)))
    assert len({c.fold_seed for c in cells}) == 1
    assert cells[0].fold_seed is not None


def test_output_dir_precedence(tmp_path: Path, monkeypatch) -> None:
    config = load_config(_write_config(tmp_path, _benchmark_config(output_dir="results")))
    assert resolve_output_dir(config, tmp_path / "cli") == tmp_path / "cli"
    assert resolve_output_dir(config) == tmp_path.resolve() / "results"
    monkeypatch.setenv("SSA_OUTPUT_DIR", str(tmp_path / "env"))
    assert resolve_output_dir(config) == tmp_path / "env" / "tiny"


# --- runs ---


def test_run_experiment_writes_every_cell(tmp_path: Path) -> None:
    path = _write_config(tmp_path, _benchmark_config())
    outcome = run_experiment(path, out=tmp_path / "out")
    assert outcome.exit_code == EXIT_OK
    out = tmp_path / "out"
    run_files = sorted(out.glob("runs/*/*/run_*[0-9].json"))
    assert len(run_files) == 12
    assert len(list(out.glob("runs/*/*/run_*_convergence.csv"))) == 12
    summary = pd.read_csv(out / "summary.csv")
    assert len(summary) == 4
    assert list(summary.columns[:7]) == ["problem", "method", "runs", "best", "worst", "mean", "std"]
    assert (summary["runs"] == 3).all()
    assert outcome.tally_lines[0].startswith("TFSSA vs SSA (+/-/=): ")
    record = json.loads((out / "runs/sphere_D3/TFSSA/run_000.json").read_text(encoding="utf-8"))
    assert record["status"] == "ok"
    assert len(record["record"]["history"]) == 9
    assert (out / "metadata.json").is_file()


def test_summary_is_byte_identical_across_runs(tmp_path: Path) -> None:
    path = _write_config(tmp_path, _benchmark_config())
    run_experiment(path, out=tmp_path / "a")
    run_experiment(path, out=tmp_path / "b")
    assert (tmp_path / "a/summary.csv").read_bytes() == (tmp_path / "b/summary.csv").read_bytes()


def test_parallel_jobs_match_serial(tmp_path: Path) -> None:
    path = _write_config(tmp_path, _benchmark_config(runs=2))
    run_experiment(path, jobs=1, out=tmp_path / "serial")
    run_experiment(path, jobs=2, out=tmp_path / "parallel")
    assert (tmp_path / "serial/summary.csv").read_bytes() == (tmp_path / "parallel/summary.csv").read_bytes()


def test_failed_cell_is_isolated(tmp_path: Path, monkeypatch) -> None:
    real = runner_module.make_function

    def flaky(family: str, *args: Any, **kwargs: Any):
        if family == "rastrigin":
            raise RuntimeError("objective exploded")
        return real(family, *args, **kwargs)

    monkeypatch.setattr(runner_module, "make_function", flaky)
    out = tmp_path / "out"
    outcome = run_experiment(_write_config(tmp_path, _benchmark_config(report_formats=["markdown"])), out=out)
    assert outcome.exit_code == EXIT_RUN_FAILED
    assert outcome.failures == 6
    failed = json.loads((out / "runs/rastrigin_D3/SSA/run_001.json").read_text(encoding="utf-8"))
    assert failed["status"] == "failed"
    assert failed["error_type"] == "RuntimeError"
    assert failed["message"] == "objective exploded"
    summary = pd.read_csv(out / "summary.csv")
    assert summary["problem"].tolist() == ["sphere_D3", "sphere_D3"]
    report = (out / "report/report.md").read_text(encoding="utf-8")
    assert "failed: rastrigin_D3/SSA/run 1: RuntimeError: objective exploded" in report


def test_invalid_config_exits_one(tmp_path: Path) -> None:
    outcome = run_experiment(_write_config(tmp_path, _benchmark_config(runs=0)), out=tmp_path / "out")
    assert outcome.exit_code == EXIT_INVALID
    assert outcome.errors == ["runs: must be >= 1 (runs ≥ 1), got 0"]
    assert not (tmp_path / "out").exists()


def test_feature_selection_mode(tmp_path: Path) -> None:
    out = tmp_path / "out"
    outcome = run_experiment(_write_config(tmp_path, _fs_config(report_formats=["csv"])), out=out)
    assert outcome.exit_code == EXIT_OK
    summary = pd.read_csv(out / "summary.csv")
    assert {"accuracy", "avg_features", "avg_ratio"} <= set(summary.columns)
    assert summary["accuracy"].between(0.0, 1.0).all()
    assert summary["avg_features"].between(1.0, 4.0).all()
    record = json.loads((out / "runs/dominant/TFSSA/run_000.json").read_text(encoding="utf-8"))
    assert record["feature_names"] == ["f0", "f1", "f2", "f3"]
    assert len(record["selection"]["mask"]) == 4
    freq = pd.read_csv(out / "report/feature_frequency.csv")
    assert set(freq["feature"]) == {"f0", "f1", "f2", "f3"}


def test_covid_fallback_writes_fixture(tmp_path: Path) -> None:
    problem = {"kind": "covid", "path": str(tmp_path / "covid19.csv"), "fallback": "synthetic", "n_samples": 60}
    cfg = _fs_config(problems=[problem], runs=1, methods=["TFSSA"])
    out = tmp_path / "out"
    assert run_experiment(_write_config(tmp_path, cfg), out=out).exit_code == EXIT_OK
    assert (out / "fixtures/covid19_covid.csv").is_file()
    record = json.loads((out / "runs/covid19/TFSSA/run_000.json").read_text(encoding="utf-8"))
    assert record["dataset"]["n_features"] == 15


# --- reports ---


@pytest.fixture
def results_dir(tmp_path: Path) -> Path:
    out = tmp_path / "results"
    run_experiment(_write_config(tmp_path, _benchmark_config()), out=out)
    return out


def test_report_csv(results_dir: Path) -> None:
    paths = emit_report(results_dir, "csv")
    assert [p.name for p in paths] == ["summary.csv", "comparison.csv", "convergence.csv"]
    comparison = pd.read_csv(results_dir / "report/comparison.csv")
    assert comparison["problem"].tolist() == ["sphere_D3", "rastrigin_D3"]
    assert set(comparison["verdict"]) <= {"+", "-", "="}
    assert "p_value" in comparison.columns
    convergence = pd.read_csv(results_dir / "report/convergence.csv")
    assert len(convergence) == 4 * 9


def test_report_json(results_dir: Path) -> None:
    emit_report(results_dir, "json")
    report = json.loads((results_dir / "report/report.json").read_text(encoding="utf-8"))
    assert len(report["summary"]) == 4
    row = report["comparisons"][0]["rows"][0]
    assert row["method"] == "exact"
    assert 0.0 <= row["p_exact"] <= 1.0
    assert 0.0 <= row["p_approx"] <= 1.0
    assert report["missing"] == [] and report["corrupt"] == []


def test_report_markdown(results_dir: Path) -> None:
    emit_report(results_dir, "markdown")
    text = (results_dir / "report/report.md").read_text(encoding="utf-8")
    assert text.startswith("# tiny")
    assert "## TFSSA vs SSA" in text
    assert "+/-/=: " in text
    assert "Unusable runs" not in text


def test_report_lists_missing_and_corrupt(results_dir: Path) -> None:
    (results_dir / "runs/sphere_D3/SSA/run_002.json").unlink()
    (results_dir / "runs/rastrigin_D3/TFSSA/run_000.json").write_text("{not json", encoding="utf-8")
    results = load_results(results_dir)
    assert results.missing == ["runs/sphere_D3/SSA/run_002.json"]
    assert len(results.corrupt) == 1 and results.corrupt[0].startswith("runs/rastrigin_D3/TFSSA/run_000.json")
    emit_report(results_dir, "markdown")
    text = (results_dir / "report/report.md").read_text(encoding="utf-8")
    assert "- missing: runs/sphere_D3/SSA/run_002.json" in text
    assert "- corrupt: runs/rastrigin_D3/TFSSA/run_000.json" in text


def test_report_errors(tmp_path: Path, results_dir: Path) -> None:
    with pytest.raises(FileNotFoundError):
        emit_report(tmp_path / "nowhere", "csv")
    with pytest.raises(ValueError, match="unknown report format"):
        emit_report(results_dir, "html")
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(ValueError, match="no completed runs"):
        emit_report(empty, "csv")
