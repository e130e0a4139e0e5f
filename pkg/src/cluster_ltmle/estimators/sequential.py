# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T12:51:18
# Last Updated: 2026-10-19T12:51:18
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Sequential (iterated conditional expectation) G-computation."""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..data.records import Dataset, Regimen
from ..data.scaling import OutcomeScaler, constant_outcome, make_scaler
from ..learners import FittedLearner, LearnerSpec
from ..types import Conditioning, EstimatorMethod
from ..utils.logging import get_logger
from .design import ModelRole, fit_on_rows, follower_counts, history, pooled_history, require_canonical
from .report import EstimateReport

logger = get_logger(__name__)


@dataclass(eq=False)
class SequentialFits:
    """Column t-1 holds Q̄_t for t = 1..K+1 on the [0, 1] scale; Q̄_{K+1} is scaled Y."""

    qbar: np.ndarray
    qbar_star: Optional[np.ndarray] = None
    epsilons: Optional[np.ndarray] = None
    models: Dict[str, dict] = field(default_factory=dict)

    @property
    def targeted(self) -> bool:
        return self.qbar_star is not None


def scaled_outcome(dataset: Dataset, scaler: OutcomeScaler) -> np.ndarray:
    """Q̄_{K+1}; censored subjects carry their imputed 0 through the scale."""
    return np.clip(scaler.scale(dataset.y), 0.0, 1.0)


def fit_q_regression(
    dataset: Dataset,
    regimen: Regimen,
    t: int,
    target: np.ndarray,
    learner: LearnerSpec,
    conditioning: Conditioning = Conditioning.SUBSET,
    seed: int = 0,
) -> Tuple[np.ndarray, FittedLearner]:
    """Fit Q̄_t = E(target | C_t = 0, Ā_{t-1} = ā_{t-1}, L̄_{t-1}, W) and predict for everyone.

    Subset conditioning fits among followers at t. Pooled conditioning fits
    among everyone uncensored at t with Ā_{t-1} as features, then evaluates
    at ā_{t-1}.
    """
    if conditioning == Conditioning.POOLED and t > 1:
        rows = dataset.c[:, t - 1] == 0
        x_fit = pooled_history(dataset, t - 1)
        x_eval = pooled_history(dataset, t - 1, regimen)
    else:
        rows = dataset.followers(regimen, t)
        x_fit = x_eval = history(dataset, t - 1)
    fitted = fit_on_rows(learner, dataset, x_fit, target, rows, t, seed, ModelRole.Q)
    return fitted.predict(x_eval), fitted


def gcomp_sequential(
    dataset: Dataset,
    regimen: Regimen,
    q_learner: LearnerSpec,
    conditioning: Conditioning = Conditioning.SUBSET,
    scaler: Optional[OutcomeScaler] = None,
    seed: int = 0,
) -> EstimateReport:
    """Backward recursion t = K..1, then ψ̂ = unscale(mean Q̄_1).

    When every uncensored outcome equals c (and no scaler is given) each
    regression returns c, so ψ̂ = c without fitting.

    Raises:
        StratumEmptyError: Nobody to fit Q̄_t on (subset conditioning)
    """
    require_canonical(dataset)
    diagnostics = {"followers": follower_counts(dataset, regimen), "conditioning": conditioning.value}
    value = constant_outcome(dataset) if scaler is None else None
    if value is not None:
        logger.debug(f"Sequential G-computation {regimen.label()}: constant outcome {value:g}")
        return EstimateReport.point(
            EstimatorMethod.GCOMP_SEQ, regimen.label(), value, dataset, {**diagnostics, "constant_outcome": True}
        )
    scaler = scaler or make_scaler(dataset)
    fits = backward_fits(dataset, regimen, q_learner, conditioning, scaler, seed)
    psi = float(scaler.unscale(fits.qbar[:, 0].mean()))
    logger.debug(f"Sequential G-computation {regimen.label()}: psi={psi:.6f}")
    return EstimateReport.point(EstimatorMethod.GCOMP_SEQ, regimen.label(), psi, dataset, diagnostics)


def backward_fits(
    dataset: Dataset,
    regimen: Regimen,
    q_learner: LearnerSpec,
    conditioning: Conditioning,
    scaler: OutcomeScaler,
    seed: int = 0,
) -> SequentialFits:
    """Untargeted Q̄_1..Q̄_{K+1}."""
    k = dataset.k
    qbar = np.empty((dataset.n, k + 1))
    qbar[:, k] = scaled_outcome(dataset, scaler)
    models = {}
    for t in range(k, 0, -1):
        qbar[:, t - 1], fitted = fit_q_regression(dataset, regimen, t, qbar[:, t], q_learner, conditioning, seed)
        models[f"q.{t}"] = fitted.summary()
    return SequentialFits(qbar=qbar, models=models)
