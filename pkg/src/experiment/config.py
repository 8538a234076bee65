"""
Experiment config: one JSON document -> ExperimentConfig. Validation collects
every violation (prefixed with the JSON path of the field) instead of stopping
at the first.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from ..benchfn import FAMILIES
from ..config import get_data_dir
from ..dataio import BUILTIN_DATASETS, COVID_FEATURES, CsvSchema
from ..featsel import FsConfig
from ..optimizer import OptimizerConfig
from ..stochastic import LevyParams, TentParams

logger = logging.getLogger(__name__)

MODES = ("benchmark", "feature_selection")
REPORT_FORMATS = ("csv", "json", "markdown")
PROBLEM_KINDS = ("function", "csv", "builtin", "covid", "synthetic")
OPTIMIZER_KEYS = (
    "variant",
    "n_sparrows",
    "pd_ratio",
    "sd_max_ratio",
    "sd_min_ratio",
    "st",
    "w0",
    "c",
    "tent_a",
    "levy_alpha",
    "chaotic_init",
    "adaptive_weight",
    "adaptive_patrollers",
    "levy_mutation",
    "best_mutation",
)


@dataclass(frozen=True)
class BudgetSpec:
    t_max: int | None = None
    max_evaluations: int | None = None
    evals_per_dim: int | None = None

    def evaluations_for(self, dim: int | None) -> int | None:
        if self.max_evaluations is not None:
            return self.max_evaluations
        if self.evals_per_dim is not None and dim:
            return self.evals_per_dim * dim
        return None


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "kind": self.kind, **self.params}


@dataclass(frozen=True)
class MethodSpec:
    id: str
    settings: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, **self.settings}


@dataclass(frozen=True)
class FsSettings:
    lam: float = 0.99
    mu: float = 0.01
    k_neighbors: int = 5
    k_folds: int = 10
    threshold: float = 0.5
    # one fold assignment (from the master seed) for every run
    shared_folds: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    name: str
    runs: int
    master_seed: int
    budget: BudgetSpec
    problems: tuple[ProblemSpec, ...]
    methods: tuple[MethodSpec, ...]
    optimizer: dict[str, Any] = field(default_factory=dict)
    fs: FsSettings = field(default_factory=FsSettings)
    output_dir: str | None = None
    report_formats: tuple[str, ...] = ("csv",)
    comparisons: tuple[tuple[str, str], ...] = ()
    source: str = ""
    raw: dict[str, Any] = field(default_factory=dict)

    def method(self, method_id: str) -> MethodSpec:
        return next(m for m in self.methods if m.id == method_id)

    def problem(self, problem_id: str) -> ProblemSpec:
        return next(p for p in self.problems if p.id == problem_id)


def resolve_data_path(value: str, config_dir: Path | None = None) -> Path:
    """Absolute as given; relative against SSA_DATA_DIR, then the config file's directory."""
    p = Path(value).expanduser()
    if p.is_absolute():
        return p
    candidate = get_data_dir() / p
    if candidate.exists() or config_dir is None:
        return candidate
    return config_dir / p


def problem_dim(problem: ProblemSpec) -> int | None:
    if problem.kind == "function":
        return int(problem.params.get("dim", 0)) or None
    return None


def build_optimizer_config(settings: dict[str, Any], budget: BudgetSpec, dim: int | None) -> OptimizerConfig:
    s = dict(settings)
    n = int(s.get("n_sparrows", 7))
    tent_a = float(s.pop("tent_a", 0.7))
    levy_alpha = float(s.pop("levy_alpha", 1.5))
    max_evals = budget.evaluations_for(dim)
    return OptimizerConfig(
        n_sparrows=n,
        t_max=budget.t_max,
        max_evaluations=max_evals,
        pd_ratio=float(s.get("pd_ratio", 0.2)),
        sd_max_ratio=float(s.get("sd_max_ratio", 0.2)),
        sd_min_ratio=float(s.get("sd_min_ratio", 0.1)),
        st=float(s.get("st", 0.8)),
        tent=TentParams(a=tent_a, psi_scale=max(1, n)),
        levy=LevyParams(alpha=levy_alpha),
        w0=float(s.get("w0", 1.0)),
        c=float(s.get("c", 0.9)),
        variant=str(s.get("variant", "TFSSA")),
        chaotic_init=s.get("chaotic_init"),
        adaptive_weight=s.get("adaptive_weight"),
        adaptive_patrollers=s.get("adaptive_patrollers"),
        levy_mutation=s.get("levy_mutation"),
        best_mutation=s.get("best_mutation"),
    )


def build_fs_config(config: ExperimentConfig, method: MethodSpec, problem: ProblemSpec, dim: int | None = None) -> FsConfig:
    settings = {**config.optimizer, **method.settings}
    return FsConfig(
        lam=config.fs.lam,
        mu=config.fs.mu,
        k_neighbors=config.fs.k_neighbors,
        k_folds=config.fs.k_folds,
        threshold=config.fs.threshold,
        optimizer=build_optimizer_config(settings, config.budget, dim or problem_dim(problem)),
    )


def method_optimizer_config(config: ExperimentConfig, method: MethodSpec, problem: ProblemSpec) -> OptimizerConfig:
    return build_optimizer_config({**config.optimizer, **method.settings}, config.budget, problem_dim(problem))


def _as_int(value: Any, path: str, errors: list[str], minimum: int | None = None) -> int | None:
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{path}: expected an integer, got {value!r}")
        return None
    if minimum is not None and value < minimum:
        errors.append(f"{path}: must be >= {minimum} ({path.split('.')[-1]} ≥ {minimum}), got {value}")
        return None
    return value


def _check_optimizer_settings(settings: dict[str, Any], path: str, errors: list[str]) -> None:
    for key in settings:
        if key not in OPTIMIZER_KEYS and key != "id":
            errors.append(f"{path}.{key}: unknown optimizer setting")


def _check_csv_header(problem: ProblemSpec, path: str, config_dir: Path | None, errors: list[str]) -> None:
    file_path = resolve_data_path(str(problem.params["path"]), config_dir)
    if not file_path.is_file():
        errors.append(f"{path}.path: dataset file not found: {file_path}")
        return
    schema = CsvSchema.from_dict(problem.params.get("schema", {}))
    try:
        head = pd.read_csv(file_path, sep=schema.delimiter, header=0 if schema.has_header else None, nrows=0)
    except Exception as e:
        errors.append(f"{path}.path: cannot read header of {file_path}: {e}")
        return
    columns = [str(c).strip() for c in head.columns]
    label = schema.label_column
    if isinstance(label, int):
        if not -len(columns) <= label < len(columns):
            errors.append(f"{path}.schema.label_column: index {label} out of range for {len(columns)} columns")
    elif schema.has_header and label not in columns:
        errors.append(f"{path}.schema.label_column: column {label!r} not in header")


def _check_covid_header(problem: ProblemSpec, path: str, config_dir: Path | None, errors: list[str]) -> None:
    from ..dataio.covid import canonical_column

    file_path = resolve_data_path(str(problem.params["path"]), config_dir)
    if not file_path.is_file():
        if problem.params.get("fallback") != "synthetic":
            errors.append(f"{path}.path: COVID-19 file not found: {file_path} (set \"fallback\": \"synthetic\" to use the fixture)")
        return
    try:
        head = pd.read_csv(file_path, nrows=0)
    except Exception as e:
        errors.append(f"{path}.path: cannot read header of {file_path}: {e}")
        return
    present = {canonical_column(str(c)) for c in head.columns}
    for col in COVID_FEATURES:
        if col not in present:
            errors.append(f"{path}.path: missing required COVID-19 column {col!r}")


def _parse_problem(raw: Any, i: int, mode: str, config_dir: Path | None, errors: list[str]) -> ProblemSpec | None:
    path = f"problems[{i}]"
    if not isinstance(raw, dict):
        errors.append(f"{path}: expected an object")
        return None
    params = {k: v for k, v in raw.items() if k not in ("id", "kind")}
    kind = raw.get("kind") or ("function" if "family" in raw else None)
    if kind not in PROBLEM_KINDS:
        errors.append(f"{path}.kind: must be one of {PROBLEM_KINDS}, got {kind!r}")
        return None
    if kind == "function":
        family = raw.get("family")
        if family not in FAMILIES:
            errors.append(f"{path}.family: unknown function family {family!r}")
        dim = _as_int(raw.get("dim"), f"{path}.dim", errors, minimum=2)
        if dim is not None and dim > 100:
            errors.append(f"{path}.dim: must be <= 100, got {dim}")
        _as_int(raw.get("seed", 0), f"{path}.seed", errors, minimum=0)
        default_id = f"{family}_D{raw.get('dim')}"
    else:
        if kind == "builtin" and raw.get("name") not in BUILTIN_DATASETS:
            errors.append(f"{path}.name: unknown built-in dataset {raw.get('name')!r}")
        if kind in ("csv", "covid") and not raw.get("path"):
            errors.append(f"{path}.path: required for {kind} problems")
        if kind == "synthetic" and raw.get("generator", "dominant") not in ("dominant", "covid"):
            errors.append(f"{path}.generator: must be 'dominant' or 'covid'")
        default_id = str(raw.get("name") or Path(str(raw.get("path", kind))).stem)
    if mode == "benchmark" and kind != "function":
        errors.append(f"{path}.kind: benchmark mode takes function problems, got {kind!r}")
    if mode == "feature_selection" and kind == "function":
        errors.append(f"{path}.kind: feature_selection mode takes dataset problems")
    problem = ProblemSpec(id=str(raw.get("id") or default_id), kind=kind, params=params)
    if kind == "csv" and raw.get("path"):
        _check_csv_header(problem, path, config_dir, errors)
    if kind == "covid" and raw.get("path"):
        _check_covid_header(problem, path, config_dir, errors)
    return problem


def parse_config(data: Any, source: str = "", config_dir: Path | None = None) -> tuple[ExperimentConfig | None, list[str]]:
    errors: list[str] = []
    if not isinstance(data, dict):
        return None, ["<root>: expected a JSON object"]

    mode = data.get("mode")
    if mode not in MODES:
        errors.append(f"mode: must be one of {MODES}, got {mode!r}")
    runs = _as_int(data.get("runs"), "runs", errors, minimum=1)
    master_seed = _as_int(data.get("master_seed", 0), "master_seed", errors, minimum=0)

    raw_budget = data.get("budget", {})
    budget = BudgetSpec()
    if not isinstance(raw_budget, dict):
        errors.append("budget: expected an object")
    else:
        budget = BudgetSpec(
            t_max=_as_int(raw_budget["t_max"], "budget.t_max", errors, 1) if "t_max" in raw_budget else None,
            max_evaluations=(
                _as_int(raw_budget["max_evaluations"], "budget.max_evaluations", errors, 1)
                if "max_evaluations" in raw_budget else None
            ),
            evals_per_dim=(
                _as_int(raw_budget["evals_per_dim"], "budget.evals_per_dim", errors, 1)
                if "evals_per_dim" in raw_budget else None
            ),
        )
        if budget.t_max is None and budget.max_evaluations is None and budget.evals_per_dim is None:
            errors.append("budget: needs t_max, max_evaluations or evals_per_dim")
        elif mode == "feature_selection" and budget.t_max is None and budget.max_evaluations is None:
            errors.append("budget.evals_per_dim: only supported in benchmark mode; set t_max or max_evaluations")

    problems: list[ProblemSpec] = []
    raw_problems = data.get("problems")
    if not isinstance(raw_problems, list) or not raw_problems:
        errors.append("problems: at least one problem is required")
    else:
        for i, raw in enumerate(raw_problems):
            p = _parse_problem(raw, i, str(mode), config_dir, errors)
            if p is not None:
                problems.append(p)
        ids = [p.id for p in problems]
        for dup in sorted({x for x in ids if ids.count(x) > 1}):
            errors.append(f"problems: duplicate problem id {dup!r}")

    optimizer = data.get("optimizer", {})
    if not isinstance(optimizer, dict):
        errors.append("optimizer: expected an object")
        optimizer = {}
    _check_optimizer_settings(optimizer, "optimizer", errors)

    methods: list[MethodSpec] = []
    raw_methods = data.get("methods")
    if not isinstance(raw_methods, list) or not raw_methods:
        errors.append("methods: at least one method is required")
    else:
        for i, raw in enumerate(raw_methods):
            if isinstance(raw, str):
                raw = {"id": raw, "variant": raw}
            if not isinstance(raw, dict) or not raw.get("id"):
                errors.append(f"methods[{i}]: expected an object with an id")
                continue
            settings = {k: v for k, v in raw.items() if k != "id"}
            _check_optimizer_settings(settings, f"methods[{i}]", errors)
            methods.append(MethodSpec(id=str(raw["id"]), settings=settings))
        ids = [m.id for m in methods]
        for dup in sorted({x for x in ids if ids.count(x) > 1}):
            errors.append(f"methods: duplicate method id {dup!r}")

    raw_fs = data.get("feature_selection", {})
    fs = FsSettings()
    if not isinstance(raw_fs, dict):
        errors.append("feature_selection: expected an object")
    else:
        try:
            fs = FsSettings(
                lam=float(raw_fs.get("lambda", 0.99)),
                mu=float(raw_fs.get("mu", 0.01)),
                k_neighbors=int(raw_fs.get("k_neighbors", 5)),
                k_folds=int(raw_fs.get("k_folds", 10)),
                threshold=float(raw_fs.get("threshold", 0.5)),
                shared_folds=bool(raw_fs.get("shared_folds", False)),
            )
        except (TypeError, ValueError) as e:
            errors.append(f"feature_selection: non-numeric setting ({e})")

    formats = data.get("report_formats", ["csv"])
    if not isinstance(formats, list) or any(f not in REPORT_FORMATS for f in formats):
        errors.append(f"report_formats: each entry must be one of {REPORT_FORMATS}")
        formats = ["csv"]

    method_ids = [m.id for m in methods]
    comparisons: list[tuple[str, str]] = []
    for i, raw in enumerate(data.get("comparisons", [])):
        if not isinstance(raw, dict) or raw.get("baseline") not in method_ids or raw.get("challenger") not in method_ids:
            errors.append(f"comparisons[{i}]: baseline and challenger must name configured methods")
            continue
        comparisons.append((raw["baseline"], raw["challenger"]))

    output_dir = data.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        errors.append("output_dir: expected a string path")
        output_dir = None

    if errors:
        return None, errors

    config = ExperimentConfig(
        mode=str(mode),
        name=str(data.get("name") or Path(source).stem or "experiment"),
        runs=int(runs or 1),
        master_seed=int(master_seed or 0),
        budget=budget,
        problems=tuple(problems),
        methods=tuple(methods),
        optimizer=dict(optimizer),
        fs=fs,
        output_dir=output_dir,
        report_formats=tuple(formats),
        comparisons=tuple(comparisons) or default_comparisons(method_ids),
        source=source,
        raw=data,
    )
    # typed invariants of every (method, problem) combination
    for m in config.methods:
        for p in config.problems:
            try:
                if config.mode == "feature_selection":
                    build_fs_config(config, m, p)
                else:
                    method_optimizer_config(config, m, p)
            except ValueError as e:
                text = str(e)
                scope = "feature_selection" if text.startswith("invalid feature-selection") else f"methods[{m.id}]"
                msg = text.split(": ", 1)[-1]
                for part in msg.split("; "):
                    entry = f"{scope}: {part}"
                    if entry not in errors:
                        errors.append(entry)
    if errors:
        return None, errors
    return config, []


def default_comparisons(method_ids: list[str]) -> tuple[tuple[str, str], ...]:
    """SSA (or the first method) as baseline against every other method."""
    if len(method_ids) < 2:
        return ()
    baseline = "SSA" if "SSA" in method_ids else method_ids[0]
    return tuple((baseline, m) for m in method_ids if m != baseline)


def _read_json(path: Path) -> tuple[Any, list[str]]:
    if not path.is_file():
        return None, [f"<file>: config not found: {path}"]
    try:
        return json.loads(path.read_text(encoding="utf-8")), []
    except json.JSONDecodeError as e:
        return None, [f"<file>: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}"]


def validate_config(config_path: Path | str) -> list[str]:
    """Every violation in the config; empty list means ok."""
    path = Path(config_path)
    data, errors = _read_json(path)
    if errors:
        return errors
    _, errors = parse_config(data, source=str(path), config_dir=path.resolve().parent)
    return errors


def load_config(config_path: Path | str) -> ExperimentConfig:
    path = Path(config_path)
    data, errors = _read_json(path)
    config = None
    if not errors:
        config, errors = parse_config(data, source=str(path), config_dir=path.resolve().parent)
    if errors or config is None:
        raise ValueError("invalid experiment config:\n  " + "\n  ".join(errors))
    return config
