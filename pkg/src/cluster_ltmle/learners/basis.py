# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19 16:41
# Last Updated: 2026-10-19 16:41
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Logistic regression on a polynomial and log expansion of the features.

0/1 columns enter linearly. Every other column is standardized; positive
columns spanning at least a factor of ten also contribute a standardized
log, and all monomials of these up to ``degree`` are formed. The expanded
design is centred and orthonormalized by a pivoted QR decomposition (as
orthogonal polynomial bases are), so nearly collinear monomials of
heavy-tailed inputs still give a well-conditioned IRLS fit. Columns that
are linearly dependent on earlier ones are dropped.
"""

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.special import expit

from ..types import LearnerKind
from ..utils.exceptions import ArgumentError
from .base import FittedLearner, TrainingSet
from .logistic import DEFAULT_RIDGE, LogisticFit, fit_logistic_irls

DEFAULT_DEGREE = 3
RANK_TOLERANCE = 1e-9
LOG_SPAN = 10.0


def _standardize(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    center = values.mean(axis=0)
    scale = values.std(axis=0)
    scale[scale == 0] = 1.0
    return center, scale


@dataclass(frozen=True, eq=False)
class Monomials:
    """Column roles and standardization constants; ``terms`` index the standardized inputs."""

    binary: np.ndarray
    continuous: np.ndarray
    center: np.ndarray
    scale: np.ndarray
    logged: np.ndarray
    log_center: np.ndarray
    log_scale: np.ndarray
    terms: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_features(cls, x: np.ndarray, degree: int) -> "Monomials":
        is_binary = np.array([np.isin(x[:, j], (0.0, 1.0)).all() for j in range(x.shape[1])], dtype=bool)
        continuous = np.flatnonzero(~is_binary)
        lowest = x[:, continuous].min(axis=0, initial=np.inf)
        highest = x[:, continuous].max(axis=0, initial=-np.inf)
        logged = continuous[(lowest > 0) & (highest >= LOG_SPAN * lowest)]
        center, scale = _standardize(x[:, continuous])
        log_center, log_scale = _standardize(np.log(x[:, logged]))
        inputs = range(continuous.size + logged.size)
        terms = [term for power in range(1, degree + 1) for term in itertools.combinations_with_replacement(inputs, power)]
        return cls(
            binary=np.flatnonzero(is_binary),
            continuous=continuous,
            center=center,
            scale=scale,
            logged=logged,
            log_center=log_center,
            log_scale=log_scale,
            terms=tuple(terms),
        )

    @property
    def size(self) -> int:
        return self.binary.size + len(self.terms)

    def expand(self, x: np.ndarray) -> np.ndarray:
        """Binary columns followed by every monomial term."""
        # nonpositive values met at prediction time get a very negative log
        logs = np.log(np.maximum(x[:, self.logged], np.finfo(float).tiny))
        z = np.column_stack([(x[:, self.continuous] - self.center) / self.scale, (logs - self.log_center) / self.log_scale])
        columns = [x[:, self.binary]] + [np.prod(z[:, list(term)], axis=1).reshape(-1, 1) for term in self.terms]
        return np.column_stack(columns)


@dataclass(frozen=True, eq=False)
class BasisExpansion:
    """Monomials restricted to ``keep``, centred and whitened on the training rows."""

    monomials: Monomials
    keep: np.ndarray
    mean: np.ndarray
    whitening: np.ndarray

    @property
    def n_columns(self) -> int:
        return self.keep.size

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (self.monomials.expand(x)[:, self.keep] - self.mean) @ self.whitening


def build_expansion(x: np.ndarray, degree: int = DEFAULT_DEGREE) -> BasisExpansion:
    """Classify columns, list the monomials and orthonormalize them on ``x``.

    Raises:
        ArgumentError: Nonpositive degree
    """
    if degree < 1:
        raise ArgumentError(f"Basis degree must be positive, got {degree}")
    monomials = Monomials.from_features(x, degree)
    raw = monomials.expand(x)
    mean = raw.mean(axis=0)
    rank = 0
    if monomials.size:
        _, r, pivots = scipy.linalg.qr(raw - mean, mode="economic", pivoting=True)
        diagonal = np.abs(np.diag(r))
        if diagonal[0] > 0:
            rank = int(np.sum(diagonal > RANK_TOLERANCE * diagonal[0]))
    if rank == 0:
        return BasisExpansion(monomials, keep=np.zeros(0, dtype=np.int64), mean=np.zeros(0), whitening=np.zeros((0, 0)))
    keep = pivots[:rank]
    # (raw - mean)[:, keep] = Q_1 R_11, so this whitening gives orthogonal columns of unit mean square
    whitening = scipy.linalg.solve_triangular(r[:rank, :rank], np.eye(rank)) * np.sqrt(x.shape[0])
    return BasisExpansion(monomials, keep=keep, mean=mean[keep], whitening=whitening)


@dataclass(eq=False)
class BasisFit(FittedLearner):
    """Main-terms logistic regression in the orthonormal basis."""

    expansion: BasisExpansion
    model: LogisticFit
    degree: int
    n_features: int
    kind: LearnerKind = field(default=LearnerKind.BASIS, init=False)

    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        return expit(self.model.linear_predictor(self.expansion.transform(x), offset))

    def summary(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "degree": self.degree,
            "columns": self.expansion.n_columns,
            "iterations": self.model.iterations,
            "ridge_fallback": self.model.ridge_fallback,
            "converged": self.model.converged,
        }


def fit_basis(ts: TrainingSet, degree: int = DEFAULT_DEGREE, ridge: float = DEFAULT_RIDGE) -> BasisFit:
    """Expand ``ts.x`` and fit a ridge-penalized logistic regression on the basis.

    Raises:
        ArgumentError: Empty training set or nonpositive degree
    """
    if ts.n == 0:
        raise ArgumentError("Cannot fit the basis learner on zero rows")
    expansion = build_expansion(ts.x, degree)
    model = fit_logistic_irls(TrainingSet(x=expansion.transform(ts.x), y=ts.y, weights=ts.weights), ridge=ridge)
    return BasisFit(expansion=expansion, model=model, degree=degree, n_features=ts.p)
