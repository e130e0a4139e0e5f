# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T10:05:44
# Last Updated: 2026-10-19T10:05:44
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Training data container and the fitted-learner interface."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.special import expit, logit

from ..types import LearnerKind
from ..utils.exceptions import ArgumentError

# All probability predictions are clamped to [BOUND, 1 - BOUND].
PREDICTION_BOUND = 1e-4


def bound(p: np.ndarray, eps: float = PREDICTION_BOUND) -> np.ndarray:
    """Clamp probabilities away from 0 and 1."""
    return np.clip(p, eps, 1.0 - eps)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Regression data: features ``x``, targets ``y`` in [0, 1], optional weights.

    ``groups`` holds integer cluster codes used only for cross-validation folds.
    """

    x: np.ndarray
    y: np.ndarray
    weights: Optional[np.ndarray] = None
    groups: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        n = len(y)
        if x.shape[0] != n:
            raise ArgumentError(f"x has {x.shape[0]} rows but y has {n}")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ArgumentError("Training data contain non-finite entries")
        if ((y < 0) | (y > 1)).any():
            raise ArgumentError("Targets must lie in [0, 1]")
        if self.weights is not None:
            weights = np.asarray(self.weights, dtype=float).reshape(-1)
            if len(weights) != n or not np.isfinite(weights).all() or (weights < 0).any():
                raise ArgumentError("Weights must be finite, nonnegative and one per row")
            object.__setattr__(self, "weights", weights)
        if self.groups is not None:
            groups = np.asarray(self.groups).reshape(-1)
            if len(groups) != n:
                raise ArgumentError("groups must have one entry per row")
            object.__setattr__(self, "groups", groups)

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @property
    def sample_weights(self) -> np.ndarray:
        return np.ones(self.n) if self.weights is None else self.weights

    def take(self, rows: Sequence[int]) -> "TrainingSet":
        rows = np.asarray(rows)
        return TrainingSet(
            x=self.x[rows],
            y=self.y[rows],
            weights=None if self.weights is None else self.weights[rows],
            groups=None if self.groups is None else self.groups[rows],
        )


class FittedLearner(ABC):
    """A fitted regression returning bounded probabilities."""

    kind: LearnerKind
    n_features: int

    def predict(self, x: np.ndarray, offset: Optional[np.ndarray] = None) -> np.ndarray:
        """Predict on ``x``; an offset is added on the logit scale.

        Raises:
            ArgumentError: Feature dimension or offset length mismatch
        """
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1) if self.n_features == 1 else x.reshape(1, -1)
        if x.shape[1] != self.n_features:
            raise ArgumentError(f"Expected {self.n_features} features, got {x.shape[1]}")
        if offset is not None:
            offset = np.asarray(offset, dtype=float).reshape(-1)
            if len(offset) != x.shape[0]:
                raise ArgumentError(f"Offset has length {len(offset)}, expected {x.shape[0]}")
        return bound(self._predict(x, offset))

    @abstractmethod
    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        """Unbounded predictions."""

    def summary(self) -> Dict[str, Any]:
        return {"kind": self.kind.value}


def apply_offset(p: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
    """expit(logit(p) + offset) for learners without a linear predictor."""
    if offset is None:
        return p
    return expit(logit(bound(p)) + offset)
