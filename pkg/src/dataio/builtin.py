"""Datasets bundled with scikit-learn, wrapped as Dataset (offline, no downloads)."""
from __future__ import annotations

from typing import Callable, NamedTuple

from sklearn import datasets as sk_datasets

from .dataset import Dataset


class _Builtin(NamedTuple):
    loader: Callable
    columns: slice | None = None


# breast_cancer is the 30-attribute diagnostic set (WDBC), not the 9-attribute original one.
# breast_cancer_mean keeps its 10 per-nucleus mean columns, small enough for exhaustive search.
_LOADERS: dict[str, _Builtin] = {
    "wine": _Builtin(sk_datasets.load_wine),
    "breast_cancer": _Builtin(sk_datasets.load_breast_cancer),
    "breast_cancer_mean": _Builtin(sk_datasets.load_breast_cancer, slice(0, 10)),
    "iris": _Builtin(sk_datasets.load_iris),
}

BUILTIN_DATASETS: tuple[str, ...] = tuple(_LOADERS)


def load_builtin(name: str) -> Dataset:
    try:
        entry = _LOADERS[name]
    except KeyError:
        raise ValueError(f"unknown built-in dataset {name!r}; known: {list(BUILTIN_DATASETS)}") from None
    bunch = entry.loader()
    features = bunch.data
    feature_names = [str(f) for f in bunch.feature_names]
    if entry.columns is not None:
        features = features[:, entry.columns]
        feature_names = feature_names[entry.columns]
    return Dataset(
        features=features,
        labels=bunch.target,
        feature_names=tuple(feature_names),
        class_names=tuple(str(c) for c in bunch.target_names),
        name=name,
        source=f"sklearn:{name}",
    )
