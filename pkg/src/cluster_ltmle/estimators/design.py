# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T12:08:31
# Last Updated: 2026-10-19T12:08:31
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Feature matrices and fitting helpers shared by the estimators."""

from enum import IntEnum
from typing import Dict, Optional

import numpy as np

from ..data.records import Dataset, Regimen
from ..learners import FittedLearner, LearnerSpec, TrainingSet, fit_learner
from ..utils.exceptions import ArgumentError, StratumEmptyError
from ..utils.seeding import derive_seed


class ModelRole(IntEnum):
    """Seed keys, so every regression gets its own fold assignment."""

    CENSORING = 1
    TREATMENT = 2
    Q = 3
    CONFOUNDER = 4
    OUTCOME = 5


def require_canonical(dataset: Dataset) -> None:
    if not dataset.is_canonical:
        raise ArgumentError("Dataset must be imputed after censoring (see impute_after_censoring)")


def history(dataset: Dataset, n_visits: int) -> np.ndarray:
    """[W, L_1, ..., L_{n_visits}]."""
    return np.column_stack([dataset.w, dataset.l[:, :n_visits]])


def pooled_history(dataset: Dataset, n_visits: int, regimen: Optional[Regimen] = None) -> np.ndarray:
    """[W, L̄_{n_visits}, Ā_{n_visits}] with Ā observed, or set to the regimen when given."""
    if regimen is None:
        treatment = dataset.a[:, :n_visits].astype(float)
    else:
        treatment = np.tile(np.asarray(regimen.prefix(n_visits), dtype=float), (dataset.n, 1))
    return np.column_stack([history(dataset, n_visits), treatment])


def fit_on_rows(
    spec: LearnerSpec,
    dataset: Dataset,
    x: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    visit: int,
    seed: int,
    role: ModelRole,
) -> FittedLearner:
    """Fit ``spec`` on the masked rows, keeping cluster codes for CV folds.

    Raises:
        StratumEmptyError: ``rows`` selects nobody
    """
    if not rows.any():
        raise StratumEmptyError(f"No subjects available for the {role.name.lower()} model at visit {visit}", visit=visit)
    ts = TrainingSet(x=x[rows], y=y[rows], groups=dataset.cluster_codes[rows])
    return fit_learner(spec, ts, seed=derive_seed(seed, int(role), visit))


def follower_counts(dataset: Dataset, regimen: Regimen) -> Dict[int, int]:
    return {t: int(dataset.followers(regimen, t).sum()) for t in range(1, dataset.k + 1)}
