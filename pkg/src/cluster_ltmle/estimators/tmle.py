# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T13:04:37
# Last Updated: 2026-10-19T13:04:37
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Longitudinal targeted maximum likelihood estimation."""

from typing import Optional, Tuple

import numpy as np
from scipy.special import expit, logit

from ..data.records import Dataset, Regimen
from ..data.scaling import OutcomeScaler, constant_outcome, make_scaler
from ..inference import InfluenceCurveValues, efficient_influence_curve
from ..learners import LearnerSpec, TrainingSet, bound, fit_logistic_irls
from ..types import Conditioning, EstimatorMethod
from ..utils.exceptions import ArgumentError
from ..utils.logging import get_logger
from .design import follower_counts, require_canonical
from .propensity import PropensityFits
from .report import EstimateReport
from .sequential import SequentialFits, fit_q_regression, scaled_outcome

logger = get_logger(__name__)

# Tighter than the learners' default so the score equations hold on the outcome scale.
FLUCTUATION_TOLERANCE = 1e-11


def clever_covariate(prop: PropensityFits, dataset: Dataset, regimen: Regimen, t: int) -> np.ndarray:
    """G_t = I(C_t = 0, Ā_{t-1} = ā_{t-1}) / ḡ_t, zero for non-followers."""
    follows = dataset.followers(regimen, t)
    return np.where(follows, 1.0 / prop.gbar[:, t - 1], 0.0)


def fluctuate(qt: np.ndarray, target: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, float]:
    """Solve Σ g (target - expit(logit qt + ε g)) = 0 for ε.

    ε is the coefficient of a no-intercept logistic regression of ``target``
    on ``g`` with offset logit(qt). Rows with g = 0 keep ``qt`` exactly.

    Returns:
        Updated values and ε
    """
    qt = np.asarray(qt, dtype=float)
    target = np.asarray(target, dtype=float)
    g = np.asarray(g, dtype=float)
    if not (len(qt) == len(target) == len(g)):
        raise ArgumentError("qt, target and g must have equal length")
    active = g != 0
    if not active.any():
        logger.warning("Clever covariate is zero for every subject; epsilon set to 0")
        return qt.copy(), 0.0
    offset = logit(bound(qt))
    fit = fit_logistic_irls(
        TrainingSet(x=g[active].reshape(-1, 1), y=target[active]),
        offset=offset[active],
        ridge=0.0,
        fit_intercept=False,
        tol=FLUCTUATION_TOLERANCE,
    )
    epsilon = float(fit.coefficients[0])
    if fit.ridge_fallback:
        logger.warning(f"Fluctuation separated; epsilon={epsilon:.4f} from the ridge refit")
    updated = np.where(active, expit(offset + epsilon * g), qt)
    return updated, epsilon


def tmle(
    dataset: Dataset,
    regimen: Regimen,
    q_learner: LearnerSpec,
    prop: PropensityFits,
    scaler: Optional[OutcomeScaler] = None,
    conditioning: Conditioning = Conditioning.SUBSET,
    seed: int = 0,
    method: EstimatorMethod = EstimatorMethod.TMLE,
) -> Tuple[EstimateReport, SequentialFits]:
    """Backward loop t = K..1: fit Q̄_t on the fluctuated Q̄¹_{t+1}, then fluctuate with G_t.

    ψ̂ = unscale(mean Q̄¹_1); se from the clustered sandwich on the efficient
    influence curve. A constant uncensored outcome c gives ψ̂ = c and D = 0.
    """
    require_canonical(dataset)
    if prop.fingerprint and prop.fingerprint != dataset.fingerprint:
        raise ArgumentError("Propensity fits were computed on a different dataset")
    value = constant_outcome(dataset) if scaler is None else None
    if value is not None:
        return _constant_outcome(dataset, regimen, prop, value, conditioning, method)
    scaler = scaler or make_scaler(dataset)
    k, n = dataset.k, dataset.n
    qbar = np.empty((n, k + 1))
    qbar_star = np.empty((n, k + 1))
    qbar[:, k] = qbar_star[:, k] = scaled_outcome(dataset, scaler)
    epsilons = np.zeros(k)
    models = {}

    for t in range(k, 0, -1):
        qbar[:, t - 1], fitted = fit_q_regression(dataset, regimen, t, qbar_star[:, t], q_learner, conditioning, seed)
        models[f"q.{t}"] = fitted.summary()
        g = clever_covariate(prop, dataset, regimen, t)
        qbar_star[:, t - 1], epsilons[t - 1] = fluctuate(qbar[:, t - 1], qbar_star[:, t], g)
        logger.debug(f"TMLE {regimen.label()} visit {t}: epsilon={epsilons[t - 1]:.6g}")

    fits = SequentialFits(qbar=qbar, qbar_star=qbar_star, epsilons=epsilons, models=models)
    psi = float(scaler.unscale(qbar_star[:, 0].mean()))
    ic = efficient_influence_curve(dataset, fits, prop, regimen, psi, scaler)
    diagnostics = {
        "followers": follower_counts(dataset, regimen),
        "epsilons": epsilons.tolist(),
        "ic_mean": float(ic.d_total.mean()),
        "conditioning": conditioning.value,
        **prop.diagnostics(),
    }
    report = EstimateReport.point(method, regimen.label(), psi, dataset, diagnostics).with_influence_curve(ic)
    return report, fits


def _constant_outcome(
    dataset: Dataset,
    regimen: Regimen,
    prop: PropensityFits,
    value: float,
    conditioning: Conditioning,
    method: EstimatorMethod,
) -> Tuple[EstimateReport, SequentialFits]:
    """Every Q̄_t is the constant itself (kept on the outcome scale); nothing to fluctuate."""
    k, n = dataset.k, dataset.n
    qbar = np.full((n, k + 1), value)
    fits = SequentialFits(qbar=qbar, qbar_star=qbar.copy(), epsilons=np.zeros(k), models={"constant": {"value": value}})
    ic = InfluenceCurveValues(np.zeros((n, k + 1)))
    diagnostics = {
        "followers": follower_counts(dataset, regimen),
        "epsilons": [0.0] * k,
        "ic_mean": 0.0,
        "conditioning": conditioning.value,
        "constant_outcome": True,
        **prop.diagnostics(),
    }
    logger.debug(f"TMLE {regimen.label()}: constant outcome {value:g}")
    report = EstimateReport.point(method, regimen.label(), value, dataset, diagnostics).with_influence_curve(ic)
    return report, fits
