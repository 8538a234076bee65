"""
COVID-19 patient table -> 15 numeric attributes plus a binary normal/patient target.
"""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from .csv_loader import CsvSchema, encode_column, read_table
from .dataset import Dataset

logger = logging.getLogger(__name__)

COVID_FEATURES: tuple[str, ...] = (
    "id",
    "location",
    "country",
    "gender",
    "age",
    "sym_on",
    "hosp_vis",
    "vis_wuhan",
    "from_wuhan",
    "symptom_1",
    "symptom_2",
    "symptom_3",
    "symptom_4",
    "symptom_5",
    "symptom_6",
)
DATE_COLUMNS = ("sym_on", "hosp_vis")
BINARY_COLUMNS = ("vis_wuhan", "from_wuhan")
TARGET_CANDIDATES = ("result", "death", "recov")
CLASS_NAMES = ("normal", "patient")

_ALIASES = {
    "code": "id",
    "nationality": "country",
    "symptom_onset": "sym_on",
    "hosp_visit_date": "hosp_vis",
    "visiting_wuhan": "vis_wuhan",
}
_FALSE_TOKENS = {"0", "0.0", "no", "false", "n", "normal", "none"}


def canonical_column(name: str) -> str:
    key = re.sub(r"[^0-9a-z]+", "_", name.strip().lower()).strip("_")
    m = re.fullmatch(r"symptom_?(\d)", key)
    if m:
        return f"symptom_{m.group(1)}"
    return _ALIASES.get(key, key)


def _to_flag(series: pd.Series) -> pd.Series:
    """Missing stays missing; 0/no/false/normal -> 0; anything else -> 1."""
    text = series.astype("string").str.strip().str.lower()
    flags = (~text.isin(_FALSE_TOKENS)).astype("Float64")
    return flags.mask(text.isna())


def _date_offsets(df: pd.DataFrame, transforms: list[dict[str, Any]]) -> dict[str, pd.Series]:
    numeric = {c: pd.to_numeric(df[c], errors="coerce") for c in DATE_COLUMNS}
    if all(numeric[c].notna().sum() == df[c].notna().sum() for c in DATE_COLUMNS):
        # already day counts
        return {c: s.astype("Float64") for c, s in numeric.items()}
    parsed = {c: pd.to_datetime(df[c], errors="coerce", format="mixed") for c in DATE_COLUMNS}
    epoch = pd.concat(list(parsed.values())).min()
    if pd.isna(epoch):
        raise ValueError(f"no parseable dates in {list(DATE_COLUMNS)}")
    transforms.append({"op": "date_offset", "columns": list(DATE_COLUMNS), "epoch": epoch.strftime("%Y-%m-%d")})
    return {c: ((s - epoch).dt.days.astype("Float64")) for c, s in parsed.items()}


def covid_preprocess(path: Path | str, target: str | None = None, delimiter: str = ",") -> Dataset:
    """
    Keep the labeled rows, map dates to day offsets from the earliest date,
    binary Wuhan fields to 0/1, and label-encode the categorical fields.
    """
    path = Path(path)
    df = read_table(path, CsvSchema(delimiter=delimiter))
    df.columns = [canonical_column(c) for c in df.columns]
    missing = [c for c in COVID_FEATURES if c not in df.columns]
    if missing:
        raise ValueError(f"{path}: missing required COVID-19 column {missing[0]!r}")
    if target is None:
        target = next((c for c in TARGET_CANDIDATES if c in df.columns), None)
        if target is None:
            raise ValueError(f"{path}: no target column; expected one of {TARGET_CANDIDATES}")
    target = canonical_column(target)
    if target not in df.columns:
        raise ValueError(f"{path}: missing required COVID-19 column {target!r}")

    transforms: list[dict[str, Any]] = []
    y = _to_flag(df[target])
    labeled = y.notna().to_numpy()
    dropped = int((~labeled).sum())
    transforms.append({
        "op": "select_labeled_rows",
        "note": "normal/patient rows form the supervised subset",
        "target": target,
        "kept": int(labeled.sum()),
        "dropped": dropped,
    })
    if dropped:
        logger.warning("Dropped %d COVID-19 row(s) without a %s value", dropped, target)
    df = df.loc[labeled].reset_index(drop=True)
    y = y[labeled].reset_index(drop=True)

    dates = _date_offsets(df, transforms)
    columns: list[np.ndarray] = []
    for name in COVID_FEATURES:
        if name in DATE_COLUMNS:
            col = dates[name]
        elif name in BINARY_COLUMNS:
            col = _to_flag(df[name])
        elif name.startswith("symptom_"):
            col = df[name].fillna("none")
        else:
            col = df[name]
        columns.append(encode_column(col.astype(object).where(col.notna(), None), name, transforms))

    labels = y.to_numpy(dtype=float).astype(int)
    ds = Dataset(
        features=np.column_stack(columns),
        labels=labels,
        feature_names=COVID_FEATURES,
        class_names=CLASS_NAMES,
        name="covid19",
        source=str(path),
        transforms=tuple(transforms),
    )
    logger.info(
        "COVID-19 data: %d labeled rows, %d attributes, %d patient(s)",
        ds.n_samples, ds.n_features, int(labels.sum()),
    )
    return ds
