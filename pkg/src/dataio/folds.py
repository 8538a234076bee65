"""Seeded stratified fold assignment that also copes with classes smaller than k."""
from __future__ import annotations

import logging

import numpy as np

from ..stochastic import SeededRng, derive_seed
from .dataset import Dataset

logger = logging.getLogger(__name__)


def stratified_folds(ds: Dataset | np.ndarray, k: int, seed: int) -> np.ndarray:
    """
    Fold id in [0, k) per row. Each class is shuffled and dealt round-robin,
    continuing where the previous class stopped, so per-class fold counts
    differ by at most one and overall fold sizes stay balanced.
    """
    if k < 2:
        raise ValueError(f"fold count must be >= 2, got {k}")
    labels = ds.labels if isinstance(ds, Dataset) else np.asarray(ds, dtype=int)
    rng = SeededRng(derive_seed(seed, "folds", k))
    folds = np.empty(len(labels), dtype=int)
    offset = 0
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        if len(members) < k:
            logger.warning("Class %s has %d member(s), fewer than %d folds", cls, len(members), k)
        shuffled = members[rng.permutation(len(members))]
        folds[shuffled] = (offset + np.arange(len(members))) % k
        offset = (offset + len(members)) % k
    return folds
