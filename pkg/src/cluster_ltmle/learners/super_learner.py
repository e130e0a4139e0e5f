# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T11:02:15
# Last Updated: 2026-10-19T11:02:15
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Super Learner: convex combination of library members chosen by V-fold CV."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..types import LearnerKind
from ..utils.exceptions import ArgumentError, LearnerFitError
from ..utils.logging import get_logger
from ..utils.seeding import make_rng
from .base import FittedLearner, TrainingSet, apply_offset
from .library import DEFAULT_FOLDS, LearnerSpec, fit_base_learner

logger = get_logger(__name__)

SIMPLEX_ITERATIONS = 1000
SIMPLEX_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EnsembleWeights:
    """alpha on the simplex over library members."""

    alpha: np.ndarray

    def __post_init__(self) -> None:
        alpha = np.asarray(self.alpha, dtype=float)
        if (alpha < 0).any() or abs(alpha.sum() - 1.0) > 1e-9:
            raise ArgumentError(f"Ensemble weights must lie on the simplex, got {alpha}")


@dataclass(eq=False)
class EnsembleFit(FittedLearner):
    members: List[FittedLearner]
    labels: List[str]
    weights: EnsembleWeights
    cv_risks: Dict[str, float]
    n_features: int
    kind: LearnerKind = field(default=LearnerKind.ENSEMBLE, init=False)

    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        stacked = np.column_stack([member.predict(x) for member in self.members])
        return apply_offset(stacked @ self.weights.alpha, offset)

    def summary(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "weights": dict(zip(self.labels, self.weights.alpha.tolist())),
            "cv_risks": self.cv_risks,
        }


def make_folds(n: int, folds: int, seed: int, groups: Optional[np.ndarray] = None) -> Tuple[np.ndarray, int]:
    """Assign rows to V folds; rows sharing a group share a fold.

    V is reduced to the number of groups (or rows) when there are fewer.
    Returns the fold label per row and the effective V.
    """
    if folds < 2:
        raise ArgumentError(f"Need at least 2 folds, got {folds}")
    if n < 2:
        raise ArgumentError(f"Need at least 2 rows for cross-validation, got {n}")
    rng = make_rng(seed, 0)
    if groups is not None:
        labels, codes = np.unique(groups, return_inverse=True)
        if len(labels) >= 2:
            v = min(folds, len(labels))
            order = rng.permutation(len(labels))
            group_fold = np.empty(len(labels), dtype=np.int64)
            group_fold[order] = np.arange(len(labels)) % v
            return group_fold[np.asarray(codes).reshape(-1)], v
        logger.debug("Fewer than two clusters: cross-validation falls back to subject-level folds")
    v = min(folds, n)
    order = rng.permutation(n)
    fold = np.empty(n, dtype=np.int64)
    fold[order] = np.arange(n) % v
    return fold, v


def cross_validated_predictions(
    ts: TrainingSet, spec: LearnerSpec, fold: np.ndarray, v: int
) -> np.ndarray:
    """Held-out predictions for every row (each row predicted by the fit without its fold)."""
    predictions = np.empty(ts.n)
    for k in range(v):
        held_out = fold == k
        fitted = fit_base_learner(spec, ts.take(np.flatnonzero(~held_out)))
        predictions[held_out] = fitted.predict(ts.x[held_out])
    return predictions


def _squared_error(y: np.ndarray, predictions: np.ndarray, weights: np.ndarray) -> float:
    return float(np.average((y - predictions) ** 2, weights=weights))


def cross_validated_loss(
    ts: TrainingSet,
    spec: LearnerSpec,
    folds: int = DEFAULT_FOLDS,
    cluster_ids: Optional[Sequence[Any]] = None,
    seed: int = 0,
) -> float:
    """Mean held-out squared error over all rows."""
    groups = None if cluster_ids is None else np.asarray(cluster_ids)
    fold, v = make_folds(ts.n, folds, seed, groups)
    if spec.kind == LearnerKind.ENSEMBLE:
        predictions = np.empty(ts.n)
        for k in range(v):
            held_out = fold == k
            train = ts.take(np.flatnonzero(~held_out))
            fitted = fit_super_learner(train, spec.members, spec.folds, seed=seed, cluster_folds=spec.cluster_folds)
            predictions[held_out] = fitted.predict(ts.x[held_out])
    else:
        predictions = cross_validated_predictions(ts, spec, fold, v)
    return _squared_error(ts.y, predictions, ts.sample_weights)


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {alpha >= 0, sum alpha = 1}."""
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    index = np.arange(1, len(v) + 1)
    rho = np.flatnonzero(u - cumulative / index > 0)[-1]
    theta = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def simplex_weights(z: np.ndarray, y: np.ndarray, weights: Optional[np.ndarray] = None) -> np.ndarray:
    """Minimize weighted mean (y - z alpha)^2 over the simplex.

    Projected gradient descent with step halving, started at the best
    single column, so the result never does worse than that column.
    """
    n, j = z.shape
    w = np.ones(n) if weights is None else weights
    w = w / w.sum()

    def risk(alpha: np.ndarray) -> float:
        return float(np.sum(w * (y - z @ alpha) ** 2))

    column_risks = np.array([risk(np.eye(j)[c]) for c in range(j)])
    alpha = np.eye(j)[int(np.argmin(column_risks))]
    current = column_risks.min()
    lipschitz = 2.0 * np.linalg.eigvalsh((z * w[:, None]).T @ z).max()
    step = 1.0 / lipschitz if lipschitz > 0 else 1.0

    for _ in range(SIMPLEX_ITERATIONS):
        gradient = -2.0 * (z * w[:, None]).T @ (y - z @ alpha)
        improved = False
        trial_step = step
        for _ in range(60):
            candidate = project_to_simplex(alpha - trial_step * gradient)
            value = risk(candidate)
            if value < current:
                improved = True
                break
            trial_step *= 0.5
        if not improved:
            break
        decrease = current - value
        alpha, current = candidate, value
        if decrease < SIMPLEX_TOLERANCE:
            break
    return alpha


def fit_super_learner(
    ts: TrainingSet,
    library: Sequence[LearnerSpec],
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    cluster_folds: bool = True,
) -> EnsembleFit:
    """Cross-validate every member, weight them on the simplex, refit on all rows.

    Raises:
        LearnerFitError: Every library member failed
    """
    if not library:
        raise ArgumentError("Super Learner library is empty")
    groups = ts.groups if cluster_folds else None
    fold, v = make_folds(ts.n, folds, seed, groups)

    labels: List[str] = []
    columns: List[np.ndarray] = []
    specs: List[LearnerSpec] = []
    for spec in library:
        try:
            columns.append(cross_validated_predictions(ts, spec, fold, v))
        except Exception as error:
            logger.warning(f"Super Learner member {spec.label()} dropped: {error}")
            continue
        labels.append(spec.label())
        specs.append(spec)
    if not specs:
        raise LearnerFitError("Every Super Learner library member failed", details={"library": [s.label() for s in library]})

    z = np.column_stack(columns)
    members: List[FittedLearner] = []
    kept: List[int] = []
    for index, spec in enumerate(specs):
        try:
            members.append(fit_base_learner(spec, ts))
            kept.append(index)
        except Exception as error:
            logger.warning(f"Super Learner member {spec.label()} dropped on full-data refit: {error}")
    if not members:
        raise LearnerFitError("Every Super Learner library member failed on the full data")

    z = z[:, kept]
    labels = [labels[i] for i in kept]
    alpha = simplex_weights(z, ts.y, ts.weights) if len(kept) > 1 else np.ones(1)
    cv_risks = {label: _squared_error(ts.y, z[:, i], ts.sample_weights) for i, label in enumerate(labels)}
    logger.debug(f"Super Learner weights {dict(zip(labels, np.round(alpha, 4).tolist()))}")
    return EnsembleFit(
        members=members,
        labels=labels,
        weights=EnsembleWeights(alpha),
        cv_risks=cv_risks,
        n_features=ts.p,
    )


def fit_learner(spec: LearnerSpec, ts: TrainingSet, seed: int = 0) -> FittedLearner:
    """Fit any learner spec; ensembles run the Super Learner with their own folds."""
    if spec.kind == LearnerKind.ENSEMBLE:
        return fit_super_learner(ts, spec.members, spec.folds, seed=seed, cluster_folds=spec.cluster_folds)
    return fit_base_learner(spec, ts)
