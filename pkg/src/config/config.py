"""
Load .env from project root; expose SSA_OUTPUT_DIR, SSA_DATA_DIR, SSA_LOG_LEVEL.
Experiment parameters live in JSON configs (src.experiment), not here.
"""
from __future__ import annotations

import logging
import os
from pathlib import Path

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _project_root() -> Path:
    """Project root (directory containing src/ or configs/)."""
    p = Path(__file__).resolve()
    # src/config/config.py -> two levels up
    for _ in range(3):
        p = p.parent
        if (p / "src").is_dir() or (p / "configs").is_dir():
            return p
    return Path.cwd()


def load_env() -> None:
    """Load env vars from project root .env if present; never overrides the environment."""
    env_file = _project_root() / ".env"
    if not env_file.is_file():
        return
    for line in env_file.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        k, _, v = line.partition("=")
        k, v = k.strip(), v.strip().strip("'\"")
        if k and v:
            os.environ.setdefault(k, v)


def _resolve(value: str) -> Path:
    p = Path(value).expanduser()
    return p if p.is_absolute() else _project_root() / p


def get_output_dir() -> Path | None:
    """Results root from SSA_OUTPUT_DIR, or None when unset (config/default decide)."""
    load_env()
    value = os.environ.get("SSA_OUTPUT_DIR")
    return _resolve(value) if value else None


def get_default_output_dir() -> Path:
    return _project_root() / "output"


def get_data_dir() -> Path:
    """Base for relative dataset paths; default <project_root>/data."""
    load_env()
    value = os.environ.get("SSA_DATA_DIR")
    if value:
        return _resolve(value)
    return _project_root() / "data"


def get_log_level() -> int:
    """Logging level from SSA_LOG_LEVEL (name, case-insensitive). Default INFO."""
    load_env()
    name = os.environ.get("SSA_LOG_LEVEL", "INFO").strip().upper()
    if name not in _LOG_LEVELS:
        return logging.INFO
    return getattr(logging, name)
