# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T09:52:17
# Last Updated: 2026-10-19T09:52:17
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Affine map of the outcome onto [0, 1] for logistic-link regressions."""

from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..utils.exceptions import DegenerateScaleError
from .records import Dataset

ArrayLike = Union[float, np.ndarray]


class OutcomeScaler(BaseModel):
    """scale(y) = (y - lo) / (hi - lo)."""

    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float

    @model_validator(mode="after")
    def validate_range(self) -> "OutcomeScaler":
        if not self.hi > self.lo:
            raise DegenerateScaleError(
                f"Outcome range is degenerate: lo={self.lo}, hi={self.hi}",
                details={"lo": self.lo, "hi": self.hi},
            )
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def scale(self, y: ArrayLike) -> ArrayLike:
        return (np.asarray(y, dtype=float) - self.lo) / self.width

    def unscale(self, z: ArrayLike) -> ArrayLike:
        return np.asarray(z, dtype=float) * self.width + self.lo


def _observed_outcomes(dataset: Dataset) -> np.ndarray:
    return dataset.y[(dataset.c[:, -1] == 0) & ~np.isnan(dataset.y)]


def constant_outcome(dataset: Dataset) -> Optional[float]:
    """The shared value when every uncensored outcome is equal, else None."""
    observed = _observed_outcomes(dataset)
    if observed.size == 0 or observed.max() != observed.min():
        return None
    return float(observed[0])


def make_scaler(dataset: Dataset) -> OutcomeScaler:
    """lo = 0 and hi = the largest uncensored outcome.

    Raises:
        DegenerateScaleError: No uncensored outcome, or all of them are equal
    """
    observed = _observed_outcomes(dataset)
    if observed.size == 0:
        raise DegenerateScaleError("No uncensored outcome to anchor the scale")
    if observed.max() == observed.min():
        raise DegenerateScaleError(
            f"All {observed.size} uncensored outcomes equal {observed[0]:g}",
            details={"value": float(observed[0]), "observed": int(observed.size)},
        )
    return OutcomeScaler(lo=0.0, hi=float(observed.max()))
