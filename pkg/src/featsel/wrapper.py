"""
Wrapper feature selection: fitness = lambda * CV error + mu * |S| / |T|,
CV error from K-NN over seeded stratified folds fixed for the whole run.
"""
from __future__ import annotations

import itertools
import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..dataio import Dataset, stratified_folds
from ..optimizer import ObjectiveContract, OptimizerConfig, RunRecord, run
from ..stochastic import SeededRng
from .knn import knn_predict
from .mask import FeatureMask, binarize

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_DIM = 16


def _default_optimizer() -> OptimizerConfig:
    return OptimizerConfig(n_sparrows=7, t_max=100, variant="TFSSA")


@dataclass(frozen=True)
class FsConfig:
    lam: float = 0.99
    mu: float = 0.01
    k_neighbors: int = 5
    k_folds: int = 10
    threshold: float = 0.5
    optimizer: OptimizerConfig = field(default_factory=_default_optimizer)

    def __post_init__(self) -> None:
        problems = self.problems()
        if problems:
            raise ValueError("invalid feature-selection config: " + "; ".join(problems))

    def problems(self) -> list[str]:
        out: list[str] = []
        if not 0.0 <= self.lam <= 1.0:
            out.append(f"lambda must be in [0, 1], got {self.lam}")
        if abs(self.lam + self.mu - 1.0) > 1e-9:
            out.append(f"fitness weights lambda + mu must equal 1, got {self.lam} + {self.mu}")
        if self.k_neighbors < 1 or self.k_neighbors % 2 == 0:
            out.append(f"k_neighbors must be odd and >= 1, got {self.k_neighbors}")
        if self.k_folds < 2:
            out.append(f"k_folds must be >= 2, got {self.k_folds}")
        if not 0.0 <= self.threshold < 1.0:
            out.append(f"threshold must be in [0, 1), got {self.threshold}")
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam,
            "mu": self.mu,
            "k_neighbors": self.k_neighbors,
            "k_folds": self.k_folds,
            "threshold": self.threshold,
            "optimizer": self.optimizer.to_dict(),
        }


@dataclass
class FsResult:
    mask: FeatureMask
    accuracy: float
    fitness: float
    n_selected: int
    selected_names: list[str]
    record: RunRecord
    cache_hits: int = 0
    cache_misses: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "mask": self.mask.to_string(),
            "accuracy": self.accuracy,
            "fitness": self.fitness,
            "n_selected": self.n_selected,
            "n_features": len(self.mask),
            "selected_names": self.selected_names,
            "cache_hits": self.cache_hits,
            "cache_misses": self.cache_misses,
        }


def fitness_value(error: float, n_selected: int, n_total: int, cfg: FsConfig) -> float:
    return cfg.lam * error + cfg.mu * n_selected / n_total


def cv_predictions(ds: Dataset, mask: FeatureMask, folds: np.ndarray, k: int) -> np.ndarray:
    """Out-of-fold K-NN prediction for every row, using only the masked columns."""
    x = ds.features[:, mask.indices]
    pred = np.empty(ds.n_samples, dtype=int)
    for f in np.unique(folds):
        test = folds == f
        pred[test] = knn_predict(x[~test], ds.labels[~test], x[test], k)
    return pred


def cv_error(
    dataset: Dataset,
    mask: FeatureMask,
    cfg: FsConfig,
    seed: int = 0,
    folds: np.ndarray | None = None,
) -> float:
    """Pooled stratified k-fold error: misclassified rows / n."""
    if len(np.unique(dataset.labels)) < 2:
        logger.warning("%s has a single class; CV error is trivially 0", dataset.name)
        return 0.0
    if folds is None:
        folds = stratified_folds(dataset, cfg.k_folds, seed)
    pred = cv_predictions(dataset, mask, folds, cfg.k_neighbors)
    return float(np.mean(pred != dataset.labels))


def fs_fitness(
    position: np.ndarray,
    dataset: Dataset,
    cfg: FsConfig,
    seed: int = 0,
    folds: np.ndarray | None = None,
) -> float:
    mask = binarize(position, cfg.threshold)
    return fitness_value(cv_error(dataset, mask, cfg, seed, folds), mask.selected_count, dataset.n_features, cfg)


class FeatureSelectionObjective:
    """
    Callable fitness over positions in [-1, 1]^D. CV errors are cached per
    mask, so positions that differ only below the threshold cost nothing.
    The cache is safe for concurrent readers and writers.
    """

    def __init__(self, dataset: Dataset, cfg: FsConfig, folds: np.ndarray) -> None:
        self.dataset = dataset
        self.cfg = cfg
        self.folds = folds
        self._cache: dict[tuple[int, ...], float] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def error(self, mask: FeatureMask) -> float:
        with self._lock:
            cached = self._cache.get(mask.bits)
            if cached is not None:
                self.hits += 1
                return cached
        err = cv_error(self.dataset, mask, self.cfg, folds=self.folds)
        with self._lock:
            self._cache.setdefault(mask.bits, err)
            self.misses += 1
        return err

    def __call__(self, position: np.ndarray) -> float:
        mask = binarize(position, self.cfg.threshold)
        return fitness_value(self.error(mask), mask.selected_count, self.dataset.n_features, self.cfg)

    def objective(self) -> ObjectiveContract:
        d = self.dataset.n_features
        return ObjectiveContract(
            dim=d,
            lower=np.full(d, -1.0),
            upper=np.full(d, 1.0),
            evaluate=self,
            name=f"fs:{self.dataset.name}",
        )


def run_feature_selection(
    dataset: Dataset,
    cfg: FsConfig,
    seed: int,
    fold_seed: int | None = None,
) -> FsResult:
    """
    One optimizer run with the wrapper fitness as objective. Folds come from
    fold_seed when given (shared protocol across runs), else from seed.
    """
    t0 = time.perf_counter()
    folds = stratified_folds(dataset, cfg.k_folds, seed if fold_seed is None else fold_seed)
    fobj = FeatureSelectionObjective(dataset, cfg, folds)
    record = run(fobj.objective(), cfg.optimizer, SeededRng(seed))
    mask = binarize(record.best_position, cfg.threshold)
    err = fobj.error(mask)
    result = FsResult(
        mask=mask,
        accuracy=1.0 - err,
        fitness=record.best_fitness,
        n_selected=mask.selected_count,
        selected_names=mask.names(dataset.feature_names),
        record=record,
        cache_hits=fobj.hits,
        cache_misses=fobj.misses,
    )
    logger.info(
        "%s on %s: accuracy=%.4f, %d/%d features (%s), fitness=%.5f (%.2fs)",
        cfg.optimizer.variant, dataset.name, result.accuracy, result.n_selected,
        dataset.n_features, ", ".join(result.selected_names), result.fitness, time.perf_counter() - t0,
    )
    return result


def exhaustive_search(dataset: Dataset, cfg: FsConfig, folds: np.ndarray) -> tuple[FeatureMask, float]:
    """Best mask over all 2^D - 1 non-empty subsets under a fixed fold assignment."""
    d = dataset.n_features
    if d > EXHAUSTIVE_MAX_DIM:
        raise ValueError(f"exhaustive search is limited to {EXHAUSTIVE_MAX_DIM} features, got {d}")
    best_mask: FeatureMask | None = None
    best_fit = np.inf
    for bits in itertools.product((0, 1), repeat=d):
        if not any(bits):
            continue
        mask = FeatureMask(bits)
        fit = fitness_value(cv_error(dataset, mask, cfg, folds=folds), mask.selected_count, d, cfg)
        if fit < best_fit:
            best_mask, best_fit = mask, fit
    assert best_mask is not None
    logger.info("Exhaustive optimum on %s: %s fitness=%.5f", dataset.name, best_mask.to_string(), best_fit)
    return best_mask, float(best_fit)
