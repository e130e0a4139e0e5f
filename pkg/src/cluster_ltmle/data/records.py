# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T09:12:40
# Last Updated: 2026-10-19T09:12:40
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Longitudinal data structure O = (W, C_1, L_1, A_1, ..., A_{K-1}, C_K, Y).

Index conventions used throughout the package (visits are 1-based in the
public API, arrays are 0-based):

* ``c[:, t-1]`` is C_t for t = 1..K (1 = censored before visit t)
* ``l[:, t-1]`` is L_t and ``a[:, t-1]`` is A_t for t = 1..K-1
* ``y`` is the outcome observed at visit K
"""

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.exceptions import ArgumentError, DatasetValidationError

Identifier = Union[int, str]


class LongitudinalRecord(BaseModel):
    """One subject's observed history."""

    model_config = ConfigDict(frozen=True)

    subject_id: Identifier = Field(..., description="Subject identifier")
    cluster_id: Identifier = Field(..., description="Cluster (hospital) membership Z_m")
    w: List[float] = Field(default_factory=list, description="Baseline covariates W")
    c: List[int] = Field(..., description="Censoring indicators C_1..C_K")
    l: List[Optional[int]] = Field(..., description="Time-dependent confounders L_1..L_{K-1}")
    a: List[Optional[int]] = Field(..., description="Treatment indicators A_1..A_{K-1}")
    y: Optional[float] = Field(None, description="Outcome count at visit K")

    @property
    def k(self) -> int:
        return len(self.c)

    @model_validator(mode="after")
    def validate_structure(self) -> "LongitudinalRecord":
        """Check vector lengths, binary coding and monotone censoring/treatment."""
        k = len(self.c)
        if k < 2:
            raise ValueError(f"Subject {self.subject_id}: at least two visits required, got K={k}")
        if len(self.l) != k - 1 or len(self.a) != k - 1:
            raise ValueError(
                f"Subject {self.subject_id}: l and a must have length K-1={k - 1}, "
                f"got {len(self.l)} and {len(self.a)}"
            )
        for name, values in (("c", self.c), ("l", self.l), ("a", self.a)):
            if any(v not in (0, 1) for v in values if v is not None):
                raise ValueError(f"Subject {self.subject_id}: {name} must be binary")
        if not _is_monotone_up(self.c):
            raise ValueError(f"Subject {self.subject_id}: non-monotone censoring {self.c}")
        if not _is_monotone_down([v for v in self.a if v is not None]):
            raise ValueError(f"Subject {self.subject_id}: non-monotone treatment {self.a}")
        for t in range(1, k):
            if self.c[t - 1] == 0 and (self.l[t - 1] is None or self.a[t - 1] is None):
                raise ValueError(f"Subject {self.subject_id}: l/a missing at uncensored visit {t}")
        if self.c[-1] == 0 and self.y is None:
            raise ValueError(f"Subject {self.subject_id}: outcome missing for an uncensored subject")
        if self.y is not None and self.y < 0:
            raise ValueError(f"Subject {self.subject_id}: outcome must be nonnegative")
        return self


class Regimen(BaseModel):
    """A fixed, monotone treatment regimen ā = (a_1, ..., a_{K-1})."""

    model_config = ConfigDict(frozen=True)

    a_bar: Tuple[int, ...] = Field(..., description="Treatment decision at each intervention visit")

    @field_validator("a_bar")
    @classmethod
    def validate_a_bar(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(value) == 0:
            raise ValueError("Regimen must contain at least one treatment decision")
        if any(v not in (0, 1) for v in value):
            raise ValueError(f"Regimen must be binary, got {value}")
        if not _is_monotone_down(value):
            raise ValueError(f"Regimen must be monotone nonincreasing, got {value}")
        return tuple(int(v) for v in value)

    @classmethod
    def parse(cls, text: Union[str, Sequence[int]]) -> "Regimen":
        """Build a regimen from ``"1,1,0"``, ``"110"`` or a sequence of ints."""
        if isinstance(text, str):
            cleaned = text.strip().strip("[]()")
            parts = [p for p in cleaned.replace(",", " ").split()] if ("," in cleaned or " " in cleaned) else list(cleaned)
            return cls(a_bar=tuple(int(p) for p in parts))
        return cls(a_bar=tuple(int(v) for v in text))

    @property
    def length(self) -> int:
        return len(self.a_bar)

    def prefix(self, t: int) -> Tuple[int, ...]:
        """ā_t = (a_1, ..., a_t)."""
        return self.a_bar[:t]

    def label(self) -> str:
        return "(" + ",".join(str(v) for v in self.a_bar) + ")"

    def is_forced(self, t: int) -> bool:
        """True when A_t is implied by monotone exposure once ā_{t-1} = 0."""
        return t >= 2 and self.a_bar[t - 2] == 0


def _is_monotone_up(values: Sequence[int]) -> bool:
    return all(values[i] <= values[i + 1] for i in range(len(values) - 1))


def _is_monotone_down(values: Sequence[int]) -> bool:
    return all(values[i] >= values[i + 1] for i in range(len(values) - 1))


def follows_regimen(record: LongitudinalRecord, regimen: Regimen, t: int) -> bool:
    """I(Ā_{t-1} = ā_{t-1}, C_t = 0) for a single record."""
    k = record.k
    if not 1 <= t <= k:
        raise ArgumentError(f"Visit index t={t} outside 1..{k}")
    if regimen.length != k - 1:
        raise ArgumentError(f"Regimen length {regimen.length} does not match K-1={k - 1}")
    if record.c[t - 1] != 0:
        return False
    return all(record.a[s] == regimen.a_bar[s] for s in range(t - 1))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable wide-form longitudinal data set.

    ``l`` and ``y`` may hold NaN for censored visits until
    :func:`impute_after_censoring` returns the canonical form.
    """

    subject_ids: np.ndarray
    cluster_ids: np.ndarray
    w: np.ndarray
    c: np.ndarray
    l: np.ndarray
    a: np.ndarray
    y: np.ndarray
    w_names: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.subject_ids)
        object.__setattr__(self, "subject_ids", np.array(self.subject_ids, dtype=object))
        object.__setattr__(self, "cluster_ids", np.array(self.cluster_ids, dtype=object))
        w = np.array(self.w, dtype=float)
        if w.ndim != 2:
            w = w.reshape(n, -1) if w.size else np.zeros((n, 0))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "c", _as_matrix(self.c, n, np.int8))
        object.__setattr__(self, "l", _as_matrix(self.l, n, float))
        object.__setattr__(self, "a", _as_matrix(self.a, n, np.int8))
        object.__setattr__(self, "y", np.array(self.y, dtype=float).reshape(n))
        if not self.w_names:
            object.__setattr__(self, "w_names", tuple(f"w.{j + 1}" for j in range(self.w.shape[1])))
        self._validate()
        for name in ("subject_ids", "cluster_ids", "w", "c", "l", "a", "y"):
            getattr(self, name).flags.writeable = False

    def _validate(self) -> None:
        n, k = self.c.shape
        if k < 2:
            raise DatasetValidationError(f"At least two visits required, got K={k}")
        if self.l.shape != (n, k - 1) or self.a.shape != (n, k - 1):
            raise DatasetValidationError(
                f"l and a must be n x (K-1) = {n} x {k - 1}, got {self.l.shape} and {self.a.shape}"
            )
        if len(self.cluster_ids) != n or self.w.shape[0] != n or len(self.y) != n:
            raise DatasetValidationError("Row counts of subject, cluster, w and y disagree")
        if len(self.w_names) != self.w.shape[1]:
            raise DatasetValidationError("w_names length does not match the number of covariates")
        if np.isnan(self.w).any():
            rows = np.flatnonzero(np.isnan(self.w).any(axis=1))
            raise DatasetValidationError(
                "Missing baseline covariates",
                subject_ids=self.subject_ids[rows].tolist(),
                rows=rows.tolist(),
            )
        finite_l = self.l[~np.isnan(self.l)]
        if not (np.isin(self.c, (0, 1)).all() and np.isin(self.a, (0, 1)).all() and np.isin(finite_l, (0, 1)).all()):
            raise DatasetValidationError("c, l and a must be coded 0/1")
        if (self.y[~np.isnan(self.y)] < 0).any():
            raise DatasetValidationError("Outcome must be nonnegative")
        bad_c = np.flatnonzero((np.diff(self.c, axis=1) < 0).any(axis=1))
        if bad_c.size:
            raise DatasetValidationError(
                f"non-monotone censoring for subjects {self.subject_ids[bad_c].tolist()}",
                subject_ids=self.subject_ids[bad_c].tolist(),
                rows=bad_c.tolist(),
            )
        bad_a = np.flatnonzero((np.diff(self.a, axis=1) > 0).any(axis=1))
        if bad_a.size:
            raise DatasetValidationError(
                f"non-monotone treatment for subjects {self.subject_ids[bad_a].tolist()}",
                subject_ids=self.subject_ids[bad_a].tolist(),
                rows=bad_a.tolist(),
            )

    @property
    def n(self) -> int:
        return len(self.subject_ids)

    @property
    def k(self) -> int:
        return self.c.shape[1]

    @property
    def p(self) -> int:
        return self.w.shape[1]

    @cached_property
    def cluster_codes(self) -> np.ndarray:
        """Integer cluster codes 0..M-1 in order of first appearance."""
        codes, _ = pd.factorize(pd.Series(self.cluster_ids, dtype=object), sort=False)
        codes = codes.astype(np.int64)
        codes.flags.writeable = False
        return codes

    @cached_property
    def cluster_index(self) -> Dict[Any, np.ndarray]:
        """Map cluster id → member row indices."""
        labels = pd.unique(pd.Series(self.cluster_ids, dtype=object))
        return {label: np.flatnonzero(self.cluster_codes == code) for code, label in enumerate(labels)}

    @property
    def m(self) -> int:
        return len(self.cluster_index)

    @property
    def cluster_sizes(self) -> Dict[Any, int]:
        return {label: len(rows) for label, rows in self.cluster_index.items()}

    @property
    def is_canonical(self) -> bool:
        """True when censored L_t and Y are exactly 0 (post-imputation form)."""
        if np.isnan(self.l).any() or np.isnan(self.y).any():
            return False
        censored_l = self.c[:, : self.k - 1] == 1
        return bool(np.all(self.l[censored_l] == 0) and np.all(self.y[self.c[:, -1] == 1] == 0))

    def uncensored(self, t: int) -> np.ndarray:
        """Boolean mask C_t = 0."""
        self._check_visit(t)
        return self.c[:, t - 1] == 0

    def followers(self, regimen: Regimen, t: int) -> np.ndarray:
        """Boolean mask I(Ā_{t-1} = ā_{t-1}, C_t = 0), vectorised follows_regimen."""
        self._check_visit(t)
        self._check_regimen(regimen)
        mask = self.c[:, t - 1] == 0
        if t > 1:
            target = np.asarray(regimen.prefix(t - 1), dtype=np.int8)
            mask &= np.all(self.a[:, : t - 1] == target, axis=1)
        return mask

    def _check_visit(self, t: int) -> None:
        if not 1 <= t <= self.k:
            raise ArgumentError(f"Visit index t={t} outside 1..{self.k}")

    def _check_regimen(self, regimen: Regimen) -> None:
        if regimen.length != self.k - 1:
            raise ArgumentError(f"Regimen {regimen.label()} has length {regimen.length}, expected K-1={self.k - 1}")

    @cached_property
    def fingerprint(self) -> str:
        """SHA-256 digest of the data arrays, used to match reports to data."""
        digest = hashlib.sha256()
        for array in (self.w, self.c, self.l, self.a, self.y):
            digest.update(np.ascontiguousarray(array, dtype=float).tobytes())
        digest.update("|".join(str(v) for v in self.cluster_ids).encode("utf-8"))
        digest.update("|".join(str(v) for v in self.subject_ids).encode("utf-8"))
        return digest.hexdigest()

    def subset(self, rows: Sequence[int], cluster_ids: Optional[Sequence[Any]] = None) -> "Dataset":
        """Rows ``rows`` (repeats allowed), optionally relabelling clusters."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            subject_ids=self.subject_ids[rows],
            cluster_ids=self.cluster_ids[rows] if cluster_ids is None else np.asarray(cluster_ids, dtype=object),
            w=self.w[rows],
            c=self.c[rows],
            l=self.l[rows],
            a=self.a[rows],
            y=self.y[rows],
            w_names=self.w_names,
        )

    def with_covariates(self, w: np.ndarray, names: Sequence[str]) -> "Dataset":
        """Same histories with a different baseline covariate matrix."""
        return Dataset(
            subject_ids=self.subject_ids,
            cluster_ids=self.cluster_ids,
            w=_as_matrix(w, self.n, float),
            c=self.c,
            l=self.l,
            a=self.a,
            y=self.y,
            w_names=tuple(names),
        )

    @property
    def records(self) -> List[LongitudinalRecord]:
        """Materialise per-subject records (NaN → None)."""
        out = []
        for i in range(self.n):
            out.append(
                LongitudinalRecord(
                    subject_id=_plain(self.subject_ids[i]),
                    cluster_id=_plain(self.cluster_ids[i]),
                    w=self.w[i].tolist(),
                    c=self.c[i].astype(int).tolist(),
                    l=[None if np.isnan(v) else int(v) for v in self.l[i]],
                    a=self.a[i].astype(int).tolist(),
                    y=None if np.isnan(self.y[i]) else float(self.y[i]),
                )
            )
        return out

    @classmethod
    def from_records(
        cls, records: Iterable[LongitudinalRecord], w_names: Optional[Sequence[str]] = None
    ) -> "Dataset":
        """Stack records into a Dataset; all records must share K."""
        records = list(records)
        if not records:
            raise DatasetValidationError("No records supplied")
        ks = {r.k for r in records}
        if len(ks) != 1:
            raise DatasetValidationError(f"Records disagree on the number of visits: {sorted(ks)}")
        p = len(records[0].w)
        return cls(
            subject_ids=np.array([r.subject_id for r in records], dtype=object),
            cluster_ids=np.array([r.cluster_id for r in records], dtype=object),
            w=np.array([r.w for r in records], dtype=float).reshape(len(records), p),
            c=np.array([r.c for r in records]),
            l=np.array([[np.nan if v is None else v for v in r.l] for r in records], dtype=float),
            a=np.array([[0 if v is None else v for v in r.a] for r in records]),
            y=np.array([np.nan if r.y is None else r.y for r in records], dtype=float),
            w_names=tuple(w_names) if w_names else (),
        )


def _as_matrix(values: Any, n: int, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    if array.ndim == 2:
        return array
    return array.reshape(n, -1) if array.size else np.zeros((n, 0), dtype=dtype)


def _plain(value: Any) -> Any:
    """Convert numpy scalars to Python scalars for pydantic."""
    return value.item() if isinstance(value, np.generic) else value


def impute_after_censoring(dataset: Dataset) -> Dataset:
    """Set L_t to 0 where C_t = 1 and Y to 0 where C_K = 1 (idempotent)."""
    k = dataset.k
    l = dataset.l.copy()
    censored_l = dataset.c[:, : k - 1] == 1
    l[censored_l] = 0.0
    y = dataset.y.copy()
    y[dataset.c[:, -1] == 1] = 0.0
    if np.isnan(l).any() or np.isnan(y).any():
        rows = np.flatnonzero(np.isnan(l).any(axis=1) | np.isnan(y))
        raise DatasetValidationError(
            "Missing L or Y at uncensored visits",
            subject_ids=dataset.subject_ids[rows].tolist(),
            rows=rows.tolist(),
        )
    return Dataset(
        subject_ids=dataset.subject_ids,
        cluster_ids=dataset.cluster_ids,
        w=dataset.w,
        c=dataset.c,
        l=l,
        a=dataset.a,
        y=y,
        w_names=dataset.w_names,
    )
