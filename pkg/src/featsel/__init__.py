"""Feature selection: binary masks, K-NN, wrapper fitness and end-to-end runs."""
from .mask import FeatureMask, binarize
from .knn import knn_classify, knn_predict, vote
from .wrapper import (
    FeatureSelectionObjective,
    FsConfig,
    FsResult,
    cv_error,
    cv_predictions,
    exhaustive_search,
    fitness_value,
    fs_fitness,
    run_feature_selection,
)

__all__ = [
    "FeatureMask",
    "binarize",
    "knn_classify",
    "knn_predict",
    "vote",
    "FeatureSelectionObjective",
    "FsConfig",
    "FsResult",
    "cv_error",
    "cv_predictions",
    "exhaustive_search",
    "fitness_value",
    "fs_fitness",
    "run_feature_selection",
]
