"""Pytest configuration and shared fixtures."""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

_ROOT = Path(__file__).resolve().parent.parent
if str(_ROOT) not in sys.path:
    sys.path.insert(0, str(_ROOT))


@pytest.fixture(autouse=True)
def isolate_env(monkeypatch):
    """Avoid leaking SSA_* settings from the shell or a project .env into tests."""
    for key in ("SSA_OUTPUT_DIR", "SSA_DATA_DIR", "SSA_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture
def sphere_objective():
    """Unshifted sphere on [-10, 10]^5."""
    from src.optimizer import ObjectiveContract

    return ObjectiveContract(
        dim=5,
        lower=np.full(5, -10.0),
        upper=np.full(5, 10.0),
        evaluate=lambda x: float(np.sum(x ** 2)),
        name="sphere5",
    )


@pytest.fixture
def tiny_csv(tmp_path: Path) -> Path:
    """Six rows, two numeric features, one categorical feature, a gap, string labels."""
    path = tmp_path / "tiny.csv"
    path.write_text(
        "height,weight,color,label\n"
        "1.0,10,red,yes\n"
        "2.0,20,blue,no\n"
        "3.0,,red,yes\n"
        "4.0,40,green,no\n"
        "5.0,50,blue,yes\n"
        "6.0,60,red,no\n",
        encoding="utf-8",
    )
    return path
