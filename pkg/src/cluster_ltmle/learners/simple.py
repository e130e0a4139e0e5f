# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T10:31:52
# Last Updated: 2026-10-19T10:31:52
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Nonparametric learners: constant mean, k-nearest-neighbour and cell means."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..types import LearnerKind
from ..utils.exceptions import ArgumentError
from .base import FittedLearner, TrainingSet, apply_offset

DEFAULT_NEIGHBOURS = 30


@dataclass(eq=False)
class MeanFit(FittedLearner):
    """Predicts the (weighted) training mean everywhere."""

    value: float
    n_features: int
    kind: LearnerKind = field(default=LearnerKind.MEAN, init=False)

    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        return apply_offset(np.full(x.shape[0], self.value), offset)

    def summary(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "value": self.value}


def fit_mean(ts: TrainingSet) -> MeanFit:
    if ts.n == 0:
        raise ArgumentError("Cannot fit the mean learner on zero rows")
    return MeanFit(value=float(np.average(ts.y, weights=ts.sample_weights)), n_features=ts.p)


@dataclass(eq=False)
class KnnFit(FittedLearner):
    """Mean outcome of the k nearest training points (Euclidean, standardized)."""

    tree: cKDTree
    y: np.ndarray
    center: np.ndarray
    scale: np.ndarray
    k: int
    n_features: int
    kind: LearnerKind = field(default=LearnerKind.KNN, init=False)

    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        if x.shape[0] == 0:
            return np.zeros(0)
        _, index = self.tree.query((x - self.center) / self.scale, k=self.k)
        index = np.asarray(index).reshape(x.shape[0], self.k)
        return apply_offset(self.y[index].mean(axis=1), offset)

    def summary(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "k": self.k}


def fit_knn(ts: TrainingSet, k: int = DEFAULT_NEIGHBOURS) -> KnnFit:
    """Cache standardized training points; k is capped at n."""
    if ts.n == 0:
        raise ArgumentError("Cannot fit k-NN on zero rows")
    if k < 1:
        raise ArgumentError(f"k must be positive, got {k}")
    center = ts.x.mean(axis=0)
    scale = ts.x.std(axis=0)
    scale[scale == 0] = 1.0
    return KnnFit(
        tree=cKDTree((ts.x - center) / scale),
        y=ts.y.copy(),
        center=center,
        scale=scale,
        k=min(int(k), ts.n),
        n_features=ts.p,
    )


@dataclass(eq=False)
class StrataFit(FittedLearner):
    """Saturated fit: mean outcome within each distinct feature row."""

    cells: np.ndarray
    means: np.ndarray
    overall: float
    n_features: int
    kind: LearnerKind = field(default=LearnerKind.STRATA, init=False)

    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        if self.n_features == 0:
            return apply_offset(np.full(x.shape[0], self.overall), offset)
        n_cells = self.cells.shape[0]
        stacked = np.vstack([self.cells, x]) + 0.0
        _, inverse = np.unique(stacked, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        lookup = np.full(inverse.max() + 1 if inverse.size else 0, self.overall)
        lookup[inverse[:n_cells]] = self.means
        return apply_offset(lookup[inverse[n_cells:]], offset)

    def summary(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "cells": int(self.cells.shape[0])}


def fit_strata(ts: TrainingSet) -> StrataFit:
    """Cell means; unseen cells predict the overall mean."""
    if ts.n == 0:
        raise ArgumentError("Cannot fit cell means on zero rows")
    weights = ts.sample_weights
    overall = float(np.average(ts.y, weights=weights))
    if ts.p == 0:
        # no features: one cell
        return StrataFit(cells=np.zeros((1, 0)), means=np.array([overall]), overall=overall, n_features=0)
    cells, inverse = np.unique(ts.x + 0.0, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    totals = np.bincount(inverse, weights=weights * ts.y, minlength=len(cells))
    counts = np.bincount(inverse, weights=weights, minlength=len(cells))
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, totals / np.where(counts > 0, counts, 1.0), overall)
    return StrataFit(cells=cells, means=means, overall=overall, n_features=ts.p)
