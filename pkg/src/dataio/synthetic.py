"""
Synthetic fixtures with a known answer: one feature decides the class, the
rest are noise. Used by the oracle checks and when the COVID-19 file is absent.
"""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..stochastic import SeededRng, derive_seed
from .dataset import Dataset

logger = logging.getLogger(__name__)

DOMINANT_COVID_FEATURE = "age"

_LOCATIONS = ("Wuhan", "Shanghai", "Tokyo", "Seoul", "Paris", "Singapore", "Bangkok", "Hong Kong")
_COUNTRIES = ("China", "Japan", "South Korea", "France", "Singapore", "Thailand")
_SYMPTOMS = ("fever", "cough", "sore throat", "fatigue", "headache", "chills", "malaise")


def make_dominant_feature_dataset(
    n_samples: int = 200,
    n_features: int = 10,
    dominant_index: int = 0,
    seed: int = 0,
    noise: float = 0.05,
) -> Dataset:
    """Binary task; column dominant_index separates the classes, the others are uniform noise."""
    if not 0 <= dominant_index < n_features:
        raise ValueError(f"dominant_index {dominant_index} outside [0, {n_features})")
    rng = SeededRng(derive_seed(seed, "dominant", n_samples, n_features))
    labels = (np.arange(n_samples) % 2)[rng.permutation(n_samples)]
    features = np.asarray(rng.random((n_samples, n_features)), dtype=float)
    features[:, dominant_index] = labels + np.asarray(rng.normal(0.0, noise, n_samples), dtype=float)
    names = tuple(f"f{j}" for j in range(n_features))
    return Dataset(
        features=features,
        labels=labels,
        feature_names=names,
        class_names=("0", "1"),
        name=f"dominant_f{dominant_index}",
        source="synthetic",
        transforms=({"op": "synthetic", "dominant_feature": names[dominant_index], "seed": seed},),
    )


def write_synthetic_covid_csv(path: Path | str, n_samples: int = 200, seed: int = 0) -> Path:
    """Raw COVID-19 style CSV (15 attributes + result) where age >= 60 means patient."""
    path = Path(path)
    rng = SeededRng(derive_seed(seed, "covid-fixture", n_samples))

    def pick(options: tuple[str, ...], blank: float = 0.0) -> list[str]:
        idx = rng.integers(0, len(options), n_samples)
        gaps = np.asarray(rng.random(n_samples)) < blank
        return ["" if g else options[i] for i, g in zip(idx, gaps)]

    age = rng.integers(18, 90, n_samples)
    onset = pd.Timestamp("2020-01-01") + pd.to_timedelta(rng.integers(0, 45, n_samples), unit="D")
    visit = onset + pd.to_timedelta(rng.integers(0, 8, n_samples), unit="D")
    frame = pd.DataFrame({
        "id": rng.permutation(n_samples) + 1,
        "location": pick(_LOCATIONS),
        "country": pick(_COUNTRIES),
        "gender": pick(("male", "female"), blank=0.05),
        "age": age,
        "sym_on": onset.strftime("%m/%d/%Y"),
        "hosp_vis": visit.strftime("%m/%d/%Y"),
        "vis_wuhan": rng.integers(0, 2, n_samples),
        "from_wuhan": rng.integers(0, 2, n_samples),
        **{f"symptom{i}": pick(_SYMPTOMS, blank=0.15 * i) for i in range(1, 7)},
        "result": (age >= 60).astype(int),
    })
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info("Wrote synthetic COVID-19 fixture: %s (%d rows)", path, n_samples)
    return path
