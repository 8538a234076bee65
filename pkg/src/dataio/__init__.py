"""Data I/O: CSV ingestion, normalization, COVID-19 pipeline, stratified folds, fixtures."""
from .dataset import Dataset, normalize_minmax
from .csv_loader import CsvSchema, load_csv
from .covid import COVID_FEATURES, covid_preprocess
from .folds import stratified_folds
from .builtin import BUILTIN_DATASETS, load_builtin
from .synthetic import DOMINANT_COVID_FEATURE, make_dominant_feature_dataset, write_synthetic_covid_csv

__all__ = [
    "Dataset",
    "normalize_minmax",
    "CsvSchema",
    "load_csv",
    "COVID_FEATURES",
    "covid_preprocess",
    "stratified_folds",
    "BUILTIN_DATASETS",
    "load_builtin",
    "DOMINANT_COVID_FEATURE",
    "make_dominant_feature_dataset",
    "write_synthetic_covid_csv",
]
