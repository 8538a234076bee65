"""
Immutable classification dataset plus the transform log that produced it.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from sklearn.preprocessing import MinMaxScaler


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    name: str = "dataset"
    source: str = ""
    transforms: tuple[dict[str, Any], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=int)
        if features.ndim != 2:
            raise ValueError(f"{self.name}: features must be a 2-D matrix, got shape {features.shape}")
        n, d = features.shape
        if n < 2:
            raise ValueError(f"{self.name}: need at least 2 rows, got {n}")
        if labels.shape != (n,):
            raise ValueError(f"{self.name}: {labels.shape[0]} labels for {n} rows")
        if len(self.feature_names) != d:
            raise ValueError(f"{self.name}: {len(self.feature_names)} feature names for {d} columns")
        if not np.all(np.isfinite(features)):
            raise ValueError(f"{self.name}: features contain NaN or Inf")
        if labels.min() < 0 or labels.max() >= len(self.class_names):
            raise ValueError(f"{self.name}: labels must lie in [0, {len(self.class_names)})")
        features.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "class_names", tuple(self.class_names))
        object.__setattr__(self, "transforms", tuple(self.transforms))

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def with_transform(self, features: np.ndarray, entry: dict[str, Any]) -> "Dataset":
        return replace(self, features=features, transforms=self.transforms + (entry,))

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "source": self.source,
            "n_samples": self.n_samples,
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "feature_names": list(self.feature_names),
            "class_names": list(self.class_names),
            "transforms": list(self.transforms),
        }


def normalize_minmax(ds: Dataset) -> Dataset:
    """Each column to [0, 1]; constant columns become 0."""
    scaler = MinMaxScaler(clip=True)
    scaled = scaler.fit_transform(ds.features)
    constant = [ds.feature_names[j] for j in np.flatnonzero(scaler.data_range_ == 0)]
    return ds.with_transform(scaled, {"op": "minmax", "constant_columns": constant})
