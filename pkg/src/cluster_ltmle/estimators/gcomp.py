# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T12:36:40
# Last Updated: 2026-10-19T12:36:40
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Likelihood-based G-computation by enumerating binary confounder histories."""

import itertools
from typing import Optional

import numpy as np

from ..data.records import Dataset, Regimen
from ..data.scaling import OutcomeScaler, constant_outcome, make_scaler
from ..learners import LearnerSpec
from ..types import EstimatorMethod
from ..utils.exceptions import EnumerationLimitError, EstimationError
from ..utils.logging import get_logger
from .design import ModelRole, fit_on_rows, follower_counts, history, require_canonical
from .report import EstimateReport

logger = get_logger(__name__)

MAX_ENUMERATED_VISITS = 20


def gcomp_likelihood(
    dataset: Dataset,
    regimen: Regimen,
    outcome_learner: LearnerSpec,
    l_learner: Optional[LearnerSpec] = None,
    scaler: Optional[OutcomeScaler] = None,
    increment: bool = False,
    seed: int = 0,
) -> EstimateReport:
    """ψ̂ = (1/n) Σ_i Σ_l̄ E(Y | C_K=0, ā, l̄, W_i) Π_t P(L_t = l_t | C_t=0, ā_{t-1}, l̄_{t-1}, W_i).

    With ``increment`` the outcome model is fit to Y - Σ_t L_t and Σ_t l_t is
    added back inside the sum, which suits outcomes built from the
    intermediate indicators.

    Raises:
        EnumerationLimitError: More than 2^20 confounder histories
        EstimationError: Negative increment
    """
    require_canonical(dataset)
    k = dataset.k
    if k - 1 > MAX_ENUMERATED_VISITS:
        raise EnumerationLimitError(
            f"Enumerating 2^{k - 1} confounder histories exceeds the limit of 2^{MAX_ENUMERATED_VISITS}"
        )
    l_learner = l_learner or outcome_learner
    full_followers = dataset.followers(regimen, k)

    if increment:
        residual = dataset.y - dataset.l.sum(axis=1)
        if (residual[full_followers] < 0).any():
            raise EstimationError("Outcome is smaller than the sum of the confounder indicators")
        top = float(residual[full_followers].max()) if full_followers.any() else 0.0
        outcome_scale = OutcomeScaler(lo=0.0, hi=top) if top > 0 else None
        target = residual / top if top > 0 else np.zeros(dataset.n)
        fixed_mean = 0.0
    else:
        fixed_mean = constant_outcome(dataset) if scaler is None else None
        outcome_scale = None if fixed_mean is not None else scaler or make_scaler(dataset)
        target = np.clip(outcome_scale.scale(dataset.y), 0.0, 1.0) if outcome_scale else np.zeros(dataset.n)

    x_outcome = history(dataset, k - 1)
    outcome_model = None
    if outcome_scale is not None:
        outcome_model = fit_on_rows(outcome_learner, dataset, x_outcome, target, full_followers, k, seed, ModelRole.OUTCOME)
    elif not full_followers.any():
        raise EstimationError(f"No subject follows {regimen.label()} through visit {k}")

    l_models = []
    for t in range(1, k):
        x_t = history(dataset, t - 1)
        follows = dataset.followers(regimen, t)
        l_models.append(fit_on_rows(l_learner, dataset, x_t, dataset.l[:, t - 1], follows, t, seed, ModelRole.CONFOUNDER))

    w = dataset.w
    n = dataset.n
    expected = np.zeros(n)
    for l_bar in itertools.product((0.0, 1.0), repeat=k - 1):
        path = np.tile(np.asarray(l_bar), (n, 1))
        weight = np.ones(n)
        for t, model in enumerate(l_models, start=1):
            p_one = model.predict(np.column_stack([w, path[:, : t - 1]]))
            weight *= p_one if l_bar[t - 1] == 1.0 else 1.0 - p_one
        if outcome_model is None:
            mean = np.full(n, fixed_mean)
        else:
            mean = outcome_scale.unscale(outcome_model.predict(np.column_stack([w, path])))
        if increment:
            mean = mean + float(sum(l_bar))
        expected += weight * mean

    psi = float(expected.mean())
    logger.debug(f"Likelihood G-computation {regimen.label()}: psi={psi:.6f}")
    return EstimateReport.point(
        EstimatorMethod.GCOMP,
        regimen.label(),
        psi,
        dataset,
        diagnostics={
            "followers": follower_counts(dataset, regimen),
            "increment": increment,
            "constant_outcome": not increment and fixed_mean is not None,
        },
    )
