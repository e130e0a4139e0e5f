# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T12:19:56
# Last Updated: 2026-10-19T12:19:56
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Cumulative probability of following the regimen and remaining uncensored.

ḡ_1 = P(C_1 = 0 | W) and, for t = 2..K,
ḡ_t = ḡ_{t-1} · P(A_{t-1} = a_{t-1} | ...) · P(C_t = 0 | ...),
each factor fitted among subjects whose history is consistent with ā.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..data.records import Dataset, Regimen
from ..learners import LearnerSpec
from ..utils.exceptions import ArgumentError
from ..utils.logging import get_logger
from .design import ModelRole, fit_on_rows, history, require_canonical

logger = get_logger(__name__)

DEFAULT_TRUNCATION = 0.005


@dataclass(eq=False)
class PropensityFits:
    """ḡ_t per subject (columns t = 1..K), floored at ``truncation``."""

    gbar: np.ndarray
    regimen: Optional[Regimen] = None
    truncation: float = DEFAULT_TRUNCATION
    censoring_factors: Optional[np.ndarray] = None
    treatment_factors: Optional[np.ndarray] = None
    truncated: Dict[int, int] = field(default_factory=dict)
    models: Dict[str, Any] = field(default_factory=dict)
    fingerprint: str = ""

    @property
    def min_gbar(self) -> float:
        return float(self.gbar.min())

    def diagnostics(self) -> Dict[str, Any]:
        return {
            "min_gbar": self.min_gbar,
            "truncation": self.truncation,
            "truncated_followers": {str(t): count for t, count in self.truncated.items()},
        }


def cumulative_propensity(censoring: np.ndarray, treatment: np.ndarray) -> np.ndarray:
    """Running product C_1, A_1·C_2, ..., A_{K-1}·C_K (columns 1..K)."""
    censoring = np.atleast_2d(np.asarray(censoring, dtype=float))
    treatment = np.atleast_2d(np.asarray(treatment, dtype=float))
    k = censoring.shape[1]
    if treatment.shape != (censoring.shape[0], k - 1):
        raise ArgumentError("Treatment factors must have one column fewer than censoring factors")
    gbar = np.empty_like(censoring)
    gbar[:, 0] = censoring[:, 0]
    for t in range(1, k):
        gbar[:, t] = gbar[:, t - 1] * treatment[:, t - 1] * censoring[:, t]
    return gbar


def fit_propensity(
    dataset: Dataset,
    regimen: Regimen,
    learner: LearnerSpec,
    truncation: float = DEFAULT_TRUNCATION,
    seed: int = 0,
) -> PropensityFits:
    """Fit every censoring and treatment factor and form ḡ.

    Censoring at t is fit among subjects who followed ā through A_{t-1}
    (everyone for t = 1), with features (W, L̄_{t-1}); treatment at t among
    followers at t, with features (W, L̄_t). Once ā has stopped treatment the
    treatment factor is exactly 1.

    Raises:
        StratumEmptyError: No subject is at risk for some model
    """
    require_canonical(dataset)
    if not 0.0 <= truncation < 1.0:
        raise ArgumentError(f"Truncation must lie in [0, 1), got {truncation}")
    n, k = dataset.n, dataset.k
    censoring = np.ones((n, k))
    treatment = np.ones((n, k - 1))
    models: Dict[str, Any] = {}

    for t in range(1, k + 1):
        x = history(dataset, t - 1)
        if t == 1:
            at_risk = np.ones(n, dtype=bool)
        else:
            at_risk = dataset.followers(regimen, t - 1) & (dataset.a[:, t - 2] == regimen.a_bar[t - 2])
        uncensored = (dataset.c[:, t - 1] == 0).astype(float)
        fitted = fit_on_rows(learner, dataset, x, uncensored, at_risk, t, seed, ModelRole.CENSORING)
        censoring[:, t - 1] = fitted.predict(x)
        models[f"censoring.{t}"] = fitted.summary()

        if t == k:
            break
        if regimen.is_forced(t):
            models[f"treatment.{t}"] = {"kind": "forced", "value": 1.0}
            continue
        x_a = history(dataset, t)
        follows = dataset.followers(regimen, t)
        matches = (dataset.a[:, t - 1] == regimen.a_bar[t - 1]).astype(float)
        fitted = fit_on_rows(learner, dataset, x_a, matches, follows, t, seed, ModelRole.TREATMENT)
        treatment[:, t - 1] = fitted.predict(x_a)
        models[f"treatment.{t}"] = fitted.summary()

    raw = cumulative_propensity(censoring, treatment)
    gbar = np.maximum(raw, truncation)
    truncated = {}
    for t in range(1, k + 1):
        count = int(np.sum((raw[:, t - 1] < truncation) & dataset.followers(regimen, t)))
        truncated[t] = count
        if count:
            logger.info(f"Truncated ḡ_{t} at {truncation} for {count} followers under {regimen.label()}")

    return PropensityFits(
        gbar=gbar,
        regimen=regimen,
        truncation=truncation,
        censoring_factors=censoring,
        treatment_factors=treatment,
        truncated=truncated,
        models=models,
        fingerprint=dataset.fingerprint,
    )
