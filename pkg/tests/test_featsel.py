"""Tests for src.featsel: masks, K-NN voting, wrapper fitness and full selection runs."""
from __future__ import annotations

import logging

import numpy as np
import pytest

from src.dataio import (
    DOMINANT_COVID_FEATURE,
    Dataset,
    covid_preprocess,
    load_builtin,
    make_dominant_feature_dataset,
    normalize_minmax,
    stratified_folds,
    write_synthetic_covid_csv,
)
from src.featsel import (
    FeatureMask,
    FeatureSelectionObjective,
    FsConfig,
    binarize,
    cv_error,
    exhaustive_search,
    fitness_value,
    fs_fitness,
    knn_classify,
    knn_predict,
    run_feature_selection,
    vote,
)
from src.optimizer import OptimizerConfig
from src.stochastic import SeededRng


def _brute_knn(train_x: np.ndarray, train_y: np.ndarray, query: np.ndarray, k: int) -> int:
    dist = np.sqrt(((train_x - query) ** 2).sum(axis=1))
    order = np.argsort(dist, kind="stable")[:k]
    return vote(np.asarray(train_y)[order])


# --- masks ---


def test_binarize_threshold_examples() -> None:
    mask = binarize(np.array([0.9, -0.9, 0.0, 0.2]))
    # (x + 1) / 2 = 0.95, 0.05, 0.5, 0.6 against 0.5
    assert mask.bits == (1, 0, 0, 1)
    assert mask.selected_count == 2
    assert mask.indices.tolist() == [0, 3]
    assert mask.to_string() == "1001"


def test_binarize_repairs_empty_mask() -> None:
    mask = binarize(np.array([-0.9, -0.2, -0.5]))
    assert mask.bits == (0, 1, 0)


def test_feature_mask_validation() -> None:
    with pytest.raises(ValueError, match="at least one"):
        FeatureMask((0, 0, 0))
    with pytest.raises(ValueError, match="0 or 1"):
        FeatureMask((0, 2))
    mask = FeatureMask.from_indices([1, 3], 5)
    assert mask.bits == (0, 1, 0, 1, 0)
    assert mask.ratio == pytest.approx(0.4)
    assert mask.names(["a", "b", "c", "d", "e"]) == ["b", "d"]


# --- K-NN ---


@pytest.mark.parametrize(
    "labels, expected",
    [([1, 1, 0], 1), ([0, 1, 1, 0], 1), ([0, 1], 0), ([2, 0, 1], 2), ([1, 0, 0, 1, 1], 1)],
)
def test_vote_drops_farthest_on_tie(labels: list[int], expected: int) -> None:
    assert vote(np.array(labels)) == expected


def test_knn_matches_brute_force() -> None:
    rng = SeededRng(11)
    for k in (1, 3, 5):
        train_x = np.asarray(rng.random((40, 4)), dtype=float)
        train_y = np.asarray(rng.integers(0, 3, 40))
        queries = np.asarray(rng.random((25, 4)), dtype=float)
        pred = knn_predict(train_x, train_y, queries, k)
        expected = [_brute_knn(train_x, train_y, q, k) for q in queries]
        assert pred.tolist() == expected


def test_knn_k_larger_than_training_set() -> None:
    train_x = np.array([[0.0], [1.0]])
    assert knn_classify(train_x, np.array([1, 0]), np.array([0.1]), k=5) == 1


def test_knn_rejects_bad_input() -> None:
    with pytest.raises(ValueError, match="k must be"):
        knn_predict(np.zeros((2, 1)), np.array([0, 1]), np.zeros((1, 1)), 0)
    with pytest.raises(ValueError, match="at least one"):
        knn_predict(np.zeros((0, 1)), np.array([], dtype=int), np.zeros((1, 1)), 1)


# --- wrapper fitness ---


def test_fitness_value_example() -> None:
    cfg = FsConfig(lam=0.99, mu=0.01)
    assert fitness_value(0.1, 3, 10, cfg) == pytest.approx(0.102, abs=1e-12)
    assert fitness_value(0.0, 10, 10, cfg) == pytest.approx(0.01, abs=1e-12)


def test_fs_config_validation() -> None:
    with pytest.raises(ValueError, match="lambda \\+ mu"):
        FsConfig(lam=0.9, mu=0.2)
    with pytest.raises(ValueError, match="odd"):
        FsConfig(k_neighbors=4)
    with pytest.raises(ValueError, match="k_folds"):
        FsConfig(k_folds=1)
    assert FsConfig().to_dict()["optimizer"]["variant"] == "TFSSA"


def test_cv_error_separable_and_noise() -> None:
    ds = make_dominant_feature_dataset(n_samples=60, n_features=4, dominant_index=1, seed=2)
    cfg = FsConfig(k_neighbors=3, k_folds=5)
    assert cv_error(ds, FeatureMask.from_indices([1], 4), cfg, seed=0) == 0.0
    noisy = cv_error(ds, FeatureMask.from_indices([0, 2, 3], 4), cfg, seed=0)
    assert 0.2 < noisy < 0.8


def test_cv_error_single_class_warns(caplog) -> None:
    ds = Dataset(features=np.arange(8.0).reshape(4, 2), labels=np.zeros(4), feature_names=("a", "b"), class_names=("only",))
    with caplog.at_level(logging.WARNING):
        assert cv_error(ds, FeatureMask((1, 1)), FsConfig(k_folds=2)) == 0.0
    assert "single class" in caplog.text


def test_fs_fitness_combines_error_and_size() -> None:
    ds = make_dominant_feature_dataset(n_samples=60, n_features=5, dominant_index=0, seed=1)
    cfg = FsConfig(k_neighbors=3, k_folds=5)
    folds = stratified_folds(ds, 5, seed=9)
    position = np.array([0.8, 0.8, -0.8, -0.8, -0.8])
    err = cv_error(ds, FeatureMask((1, 1, 0, 0, 0)), cfg, folds=folds)
    assert fs_fitness(position, ds, cfg, folds=folds) == pytest.approx(0.99 * err + 0.01 * 2 / 5, abs=1e-12)


def test_objective_caches_by_mask() -> None:
    ds = make_dominant_feature_dataset(n_samples=40, n_features=3, seed=0)
    cfg = FsConfig(k_neighbors=3, k_folds=4)
    fobj = FeatureSelectionObjective(ds, cfg, stratified_folds(ds, 4, seed=0))
    first = fobj(np.array([0.9, -0.9, 0.3]))
    second = fobj(np.array([0.5, -0.1, 0.7]))
    assert first == second
    assert (fobj.misses, fobj.hits) == (1, 1)
    contract = fobj.objective()
    assert contract.dim == 3
    assert np.all(contract.lower == -1.0) and np.all(contract.upper == 1.0)


# --- end-to-end ---


def _small_cfg(variant: str = "TFSSA", t_max: int = 30) -> FsConfig:
    return FsConfig(k_neighbors=3, k_folds=5, optimizer=OptimizerConfig(n_sparrows=7, t_max=t_max, variant=variant))


def test_run_feature_selection_finds_dominant_feature() -> None:
    ds = make_dominant_feature_dataset(n_samples=80, n_features=8, dominant_index=5, seed=4)
    result = run_feature_selection(ds, _small_cfg(), seed=13)
    assert 5 in result.mask.indices.tolist()
    assert result.accuracy >= 0.9
    assert result.n_selected == result.mask.selected_count
    assert "f5" in result.selected_names
    assert result.cache_misses >= 1
    assert result.to_dict()["n_features"] == 8


def _dominant_hits(ds: Dataset, feature: str, cfg: FsConfig, seeds: range) -> int:
    return sum(feature in run_feature_selection(ds, cfg, seed=seed).selected_names for seed in seeds)


def test_dominant_feature_selected_in_most_seeded_runs() -> None:
    ds = make_dominant_feature_dataset(n_samples=80, n_features=8, dominant_index=5, seed=4)
    assert _dominant_hits(ds, "f5", _small_cfg(t_max=20), range(20)) >= 18


def test_covid_fixture_dominant_attribute_selected(tmp_path) -> None:
    path = write_synthetic_covid_csv(tmp_path / "covid.csv", n_samples=120, seed=4)
    ds = normalize_minmax(covid_preprocess(path))
    assert ds.n_features == 15
    assert _dominant_hits(ds, DOMINANT_COVID_FEATURE, _small_cfg(t_max=20), range(20)) >= 18


def test_run_feature_selection_is_deterministic() -> None:
    ds = make_dominant_feature_dataset(n_samples=50, n_features=5, seed=7)
    a = run_feature_selection(ds, _small_cfg(t_max=10), seed=3, fold_seed=1)
    b = run_feature_selection(ds, _small_cfg(t_max=10), seed=3, fold_seed=1)
    assert a.mask == b.mask
    assert a.fitness == b.fitness
    assert a.record.history == b.record.history


@pytest.mark.parametrize("variant", ["SSA", "TFSSA"])
def test_optimizer_never_beats_exhaustive_optimum(variant: str) -> None:
    ds = make_dominant_feature_dataset(n_samples=60, n_features=6, dominant_index=2, seed=5)
    cfg = _small_cfg(variant)
    fold_seed = 21
    best_mask, best_fit = exhaustive_search(ds, cfg, stratified_folds(ds, cfg.k_folds, fold_seed))
    assert 2 in best_mask.indices.tolist()
    result = run_feature_selection(ds, cfg, seed=8, fold_seed=fold_seed)
    assert result.fitness >= best_fit - 1e-12
    if variant == "TFSSA":
        assert result.fitness - best_fit <= 0.02


def test_exhaustive_search_dimension_limit() -> None:
    ds = make_dominant_feature_dataset(n_samples=20, n_features=17, seed=0)
    with pytest.raises(ValueError, match="limited to 16"):
        exhaustive_search(ds, FsConfig(k_folds=2), stratified_folds(ds, 2, 0))


def _table_cfg(t_max: int, k_folds: int = 10) -> FsConfig:
    return FsConfig(k_neighbors=5, k_folds=k_folds, optimizer=OptimizerConfig(n_sparrows=7, t_max=t_max, variant="TFSSA"))


def test_wine_accuracy_and_subset_size() -> None:
    ds = normalize_minmax(load_builtin("wine"))
    results = [run_feature_selection(ds, _table_cfg(t_max=30), seed=seed) for seed in range(3)]
    assert np.mean([r.accuracy for r in results]) >= 0.93
    assert np.mean([r.n_selected for r in results]) <= 9


def test_real_data_optimizer_close_to_exhaustive_optimum() -> None:
    ds = normalize_minmax(load_builtin("breast_cancer_mean"))
    assert ds.n_features == 10
    cfg = _table_cfg(t_max=30, k_folds=5)
    fold_seed = 3
    _, best_fit = exhaustive_search(ds, cfg, stratified_folds(ds, cfg.k_folds, fold_seed))
    fits = [run_feature_selection(ds, cfg, seed=seed, fold_seed=fold_seed).fitness for seed in range(4)]
    assert min(fits) >= best_fit - 1e-12
    assert min(fits) - best_fit <= 0.02
