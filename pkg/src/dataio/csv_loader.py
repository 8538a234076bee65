"""
UCI-style CSV -> Dataset. Numeric columns are parsed as floats, anything else
is label-encoded; gaps are imputed (median / mode) and every imputation and
encoding is written to the transform log.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from sklearn.preprocessing import LabelEncoder

from .dataset import Dataset

logger = logging.getLogger(__name__)

DEFAULT_MISSING = ("", "?", "NA", "N/A", "NaN", "nan", "null", "None")


@dataclass(frozen=True)
class CsvSchema:
    label_column: int | str = -1
    delimiter: str = ","
    has_header: bool = True
    missing_markers: tuple[str, ...] = DEFAULT_MISSING
    # columns to drop before encoding (row ids, free text)
    drop_columns: tuple[str | int, ...] = ()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CsvSchema":
        return cls(
            label_column=data.get("label_column", -1),
            delimiter=data.get("delimiter", ","),
            has_header=bool(data.get("has_header", True)),
            missing_markers=tuple(data.get("missing_markers", DEFAULT_MISSING)),
            drop_columns=tuple(data.get("drop_columns", ())),
        )


def read_table(path: Path, schema: CsvSchema) -> pd.DataFrame:
    """Raw string table; parser failures become ValueError with the offending line."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Dataset file not found: {path}")
    try:
        df = pd.read_csv(
            path,
            sep=schema.delimiter,
            header=0 if schema.has_header else None,
            dtype=str,
            keep_default_na=False,
            na_values=list(schema.missing_markers),
            skipinitialspace=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as e:
        raise ValueError(f"{path}: empty CSV file") from e
    except pd.errors.ParserError as e:
        m = re.search(r"line (\d+)", str(e))
        where = f"line {m.group(1)}" if m else "unknown line"
        raise ValueError(f"{path}: unparseable row at {where}: {e}") from e
    if not schema.has_header:
        df.columns = [f"col{j}" for j in range(df.shape[1])]
    df.columns = [str(c).strip() for c in df.columns]
    return df


def resolve_column(df: pd.DataFrame, column: int | str) -> str:
    if isinstance(column, int) or (isinstance(column, str) and column.lstrip("-").isdigit() and column not in df.columns):
        j = int(column)
        if not -df.shape[1] <= j < df.shape[1]:
            raise ValueError(f"label column index {j} out of range for {df.shape[1]} columns")
        return str(df.columns[j])
    if column not in df.columns:
        raise ValueError(f"label column {column!r} not found; columns: {list(df.columns)}")
    return str(column)


def _is_numeric(series: pd.Series) -> bool:
    present = series.dropna()
    return bool(len(present)) and bool(pd.to_numeric(present, errors="coerce").notna().all())


def encode_labels(series: pd.Series) -> tuple[np.ndarray, tuple[str, ...]]:
    """Class ids in sorted class order (numeric order for numeric labels)."""
    le = LabelEncoder()
    if _is_numeric(series):
        values = pd.to_numeric(series).to_numpy(dtype=float)
        ids = le.fit_transform(values)
        names = tuple(format(v, "g") for v in le.classes_)
    else:
        ids = le.fit_transform(series.astype(str).str.strip().to_numpy())
        names = tuple(str(v) for v in le.classes_)
    return np.asarray(ids, dtype=int), names


def encode_column(series: pd.Series, name: str, transforms: list[dict[str, Any]]) -> np.ndarray:
    """One feature column to floats, imputing gaps."""
    missing = int(series.isna().sum())
    if missing == len(series):
        raise ValueError(f"column {name!r} has no values")
    if _is_numeric(series):
        values = pd.to_numeric(series, errors="coerce")
        if missing:
            fill = float(values.median())
            values = values.fillna(fill)
            transforms.append({"op": "impute", "column": name, "strategy": "median", "value": fill, "count": missing})
            logger.warning("Imputed %d missing value(s) in %s with median %g", missing, name, fill)
        return values.to_numpy(dtype=float)
    text = series.astype("string").str.strip()
    if missing:
        fill = str(text.mode(dropna=True).iloc[0])
        text = text.fillna(fill)
        transforms.append({"op": "impute", "column": name, "strategy": "mode", "value": fill, "count": missing})
        logger.warning("Imputed %d missing value(s) in %s with mode %r", missing, name, fill)
    le = LabelEncoder()
    codes = le.fit_transform(text.to_numpy(dtype=str))
    transforms.append({"op": "label_encode", "column": name, "classes": [str(c) for c in le.classes_]})
    return codes.astype(float)


def frame_to_dataset(
    df: pd.DataFrame,
    label: str,
    *,
    name: str,
    source: str,
    transforms: list[dict[str, Any]] | None = None,
) -> Dataset:
    transforms = list(transforms or [])
    unlabeled = int(df[label].isna().sum())
    if unlabeled:
        df = df[df[label].notna()].reset_index(drop=True)
        transforms.append({"op": "drop_unlabeled_rows", "count": unlabeled})
        logger.warning("Dropped %d row(s) without a label in %s", unlabeled, source)
    labels, class_names = encode_labels(df[label])
    feature_cols = [c for c in df.columns if c != label]
    columns = [encode_column(df[c], c, transforms) for c in feature_cols]
    features = np.column_stack(columns) if columns else np.empty((len(df), 0))
    return Dataset(
        features=features,
        labels=labels,
        feature_names=tuple(feature_cols),
        class_names=class_names,
        name=name,
        source=source,
        transforms=tuple(transforms),
    )


def load_csv(path: Path | str, schema: CsvSchema | None = None, name: str | None = None) -> Dataset:
    schema = schema or CsvSchema()
    path = Path(path)
    df = read_table(path, schema)
    label = resolve_column(df, schema.label_column)
    drop = [resolve_column(df, c) for c in schema.drop_columns]
    transforms: list[dict[str, Any]] = []
    if drop:
        df = df.drop(columns=drop)
        transforms.append({"op": "drop_columns", "columns": drop})
    ds = frame_to_dataset(df, label, name=name or path.stem, source=str(path), transforms=transforms)
    logger.info(
        "Loaded %s: %d rows, %d features, %d classes",
        ds.name, ds.n_samples, ds.n_features, ds.n_classes,
    )
    return ds
