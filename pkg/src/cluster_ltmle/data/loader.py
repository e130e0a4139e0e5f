# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T09:40:02
# Last Updated: 2026-10-19T09:40:02
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""CSV ingestion for wide (one row per subject) and long (one row per visit) files."""

import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd

from ..utils.config_parser import load_config_file
from ..utils.exceptions import DatasetSchemaError, DatasetValidationError
from ..utils.logging import get_logger
from .records import Dataset

logger = get_logger(__name__)

SchemaLike = Union[None, str, Path, Mapping[str, str]]

_W_KEY = re.compile(r"^w\.(\d+)$")
_VISIT_KEY = re.compile(r"^([cla])\.(\d+)$")

# Row numbers in messages count the header as line 1.
_HEADER_OFFSET = 2


def resolve_schema(schema: SchemaLike) -> Dict[str, str]:
    """Return the canonical-name → column-name mapping.

    ``schema`` may be a mapping, a path to a JSON/JSON5 file, or None for the
    identity mapping (columns already carry canonical names).
    """
    if schema is None:
        return {}
    if isinstance(schema, (str, Path)):
        raw = load_config_file(schema)
    else:
        raw = dict(schema)
    mapping = raw.get("columns", raw)
    if not all(isinstance(k, str) and isinstance(v, str) for k, v in mapping.items()):
        raise DatasetSchemaError("Schema must map canonical names to column names (strings)")
    return dict(mapping)


def load_dataset(
    path: Union[str, Path],
    schema: SchemaLike = None,
    long: bool = False,
    drop_incomplete_baseline: bool = False,
) -> Dataset:
    """Load a longitudinal data set from CSV.

    Args:
        path: UTF-8 CSV file with a header row
        schema: Column mapping (see :func:`resolve_schema`)
        long: Input has one row per subject-visit with columns ``visit``,
            ``c``, ``l``, ``a`` (and ``y`` on the last visit)
        drop_incomplete_baseline: Drop subjects with missing W instead of failing

    Returns:
        Dataset before censoring imputation

    Raises:
        DatasetSchemaError: Required columns are missing
        DatasetValidationError: Monotonicity or completeness violations
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise DatasetSchemaError(f"Data file not found: {file_path}", details={"path": str(file_path)})

    mapping = resolve_schema(schema)
    # save_dataset writes %.17g; the default fast parser can be off by one ulp
    frame = pd.read_csv(file_path, encoding="utf-8", float_precision="round_trip")
    frame = frame.rename(columns={column: key for key, column in mapping.items()})

    if long:
        frame = _long_to_wide(frame)

    dataset = _frame_to_dataset(frame, drop_incomplete_baseline)
    logger.info(
        f"Loaded {file_path.name}: n={dataset.n}, K={dataset.k}, M={dataset.m} clusters, "
        f"p={dataset.p} baseline covariates"
    )
    return dataset


def _w_columns(columns: List[str]) -> List[str]:
    found = [(int(m.group(1)), c) for c in columns if (m := _W_KEY.match(c))]
    return [c for _, c in sorted(found)]


def _visit_columns(columns: List[str], prefix: str) -> Dict[int, str]:
    out = {}
    for column in columns:
        match = _VISIT_KEY.match(column)
        if match and match.group(1) == prefix:
            out[int(match.group(2))] = column
    return out


def _long_to_wide(frame: pd.DataFrame) -> pd.DataFrame:
    """Pivot one-row-per-visit input into the canonical wide layout."""
    required = ["id", "cluster", "visit", "c"]
    missing = [col for col in required if col not in frame.columns]
    if missing:
        raise DatasetSchemaError(f"Long-format file is missing columns: {missing}", missing_columns=missing)

    w_cols = _w_columns(list(frame.columns))
    base = frame.groupby("id", sort=False)[["cluster", *w_cols]].first()
    wide = base.copy()
    for prefix in ("c", "l", "a"):
        if prefix not in frame.columns:
            continue
        pivot = frame.pivot(index="id", columns="visit", values=prefix)
        for visit in pivot.columns:
            wide[f"{prefix}.{int(visit)}"] = pivot[visit]
    k = int(frame["visit"].max())
    # l and a stop at K-1
    wide = wide.drop(columns=[f"l.{k}", f"a.{k}"], errors="ignore")
    if "y" in frame.columns:
        wide["y"] = frame.loc[frame["visit"] == k].set_index("id")["y"]
    return wide.reset_index()


def _frame_to_dataset(frame: pd.DataFrame, drop_incomplete_baseline: bool) -> Dataset:
    columns = list(frame.columns)
    c_cols = _visit_columns(columns, "c")
    k = max(c_cols) if c_cols else 0
    required = ["id", "cluster", "y"] + [f"c.{t}" for t in range(1, k + 1)]
    required += [f"{p}.{t}" for p in ("l", "a") for t in range(1, k)]
    missing = [col for col in required if col not in frame.columns]
    if k < 2:
        missing.append("c.2")
    if missing:
        raise DatasetSchemaError(f"Missing required columns: {missing}", missing_columns=missing)

    w_cols = _w_columns(columns)
    frame = frame.reset_index(drop=True)
    line_numbers = frame.index.to_numpy() + _HEADER_OFFSET

    if w_cols:
        incomplete = frame[w_cols].isna().any(axis=1).to_numpy()
        if incomplete.any():
            ids = frame.loc[incomplete, "id"].tolist()
            if not drop_incomplete_baseline:
                raise DatasetValidationError(
                    f"Missing baseline covariates for subjects {ids}",
                    subject_ids=ids,
                    rows=line_numbers[incomplete].tolist(),
                )
            logger.warning(f"Dropping {len(ids)} subjects with incomplete baseline information: {ids}")
            frame = frame.loc[~incomplete].reset_index(drop=True)
            line_numbers = line_numbers[~incomplete]

    c = frame[[f"c.{t}" for t in range(1, k + 1)]].to_numpy(dtype=float)
    if np.isnan(c).any():
        rows = np.flatnonzero(np.isnan(c).any(axis=1))
        raise DatasetValidationError(
            "Censoring indicators may not be missing",
            subject_ids=frame["id"].iloc[rows].tolist(),
            rows=line_numbers[rows].tolist(),
        )
    l = frame[[f"l.{t}" for t in range(1, k)]].to_numpy(dtype=float)
    a = frame[[f"a.{t}" for t in range(1, k)]].to_numpy(dtype=float)
    y = frame["y"].to_numpy(dtype=float)

    uncensored = c[:, : k - 1] == 0
    if np.isnan(a[uncensored]).any():
        rows = np.flatnonzero((np.isnan(a) & uncensored).any(axis=1))
        raise DatasetValidationError(
            "Treatment missing at an uncensored visit",
            subject_ids=frame["id"].iloc[rows].tolist(),
            rows=line_numbers[rows].tolist(),
        )
    # unobserved after censoring; never enters a follower indicator
    a = np.nan_to_num(a, nan=0.0)

    try:
        return Dataset(
            subject_ids=frame["id"].to_numpy(dtype=object),
            cluster_ids=frame["cluster"].to_numpy(dtype=object),
            w=frame[w_cols].to_numpy(dtype=float) if w_cols else np.zeros((len(frame), 0)),
            c=c.astype(np.int8),
            l=l,
            a=a.astype(np.int8),
            y=y,
            w_names=tuple(w_cols),
        )
    except DatasetValidationError as error:
        error.rows = [int(line_numbers[r]) for r in error.rows]
        error.details.setdefault("rows", error.rows)
        raise


def dataset_to_frame(dataset: Dataset) -> pd.DataFrame:
    """Wide canonical frame (used by the simulation audit dumps and tests)."""
    data: Dict[str, Any] = {"id": dataset.subject_ids, "cluster": dataset.cluster_ids}
    for j, name in enumerate(dataset.w_names):
        data[name] = dataset.w[:, j]
    for t in range(1, dataset.k + 1):
        data[f"c.{t}"] = dataset.c[:, t - 1]
    for t in range(1, dataset.k):
        data[f"l.{t}"] = dataset.l[:, t - 1]
        data[f"a.{t}"] = dataset.a[:, t - 1]
    data["y"] = dataset.y
    return pd.DataFrame(data)


def save_dataset(dataset: Dataset, path: Union[str, Path], schema: Optional[Mapping[str, str]] = None) -> Path:
    """Write a dataset as canonical wide CSV (optionally renaming via ``schema``)."""
    frame = dataset_to_frame(dataset)
    if schema:
        frame = frame.rename(columns=dict(schema))
    out = Path(path)
    frame.to_csv(out, index=False, float_format="%.17g")
    return out
