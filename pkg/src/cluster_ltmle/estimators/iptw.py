# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T13:17:45
# Last Updated: 2026-10-19T13:17:45
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Stabilized inverse probability of treatment and censoring weighting."""

import numpy as np

from ..data.records import Dataset, Regimen
from ..inference import InfluenceCurveValues
from ..types import EstimatorMethod
from ..utils.exceptions import ArgumentError, EstimationError
from .design import follower_counts
from .propensity import PropensityFits
from .report import EstimateReport


def iptw(dataset: Dataset, regimen: Regimen, prop: PropensityFits) -> EstimateReport:
    """ψ̂ = Σ I_i y_i / ḡ_{K,i} / Σ I_i / ḡ_{K,i}, I_i = followed ā through visit K.

    The influence curve is D_i = I_i (s / ḡ_{K,i})(y_i - ψ̂) / mean_j(I_j s / ḡ_{K,j})
    with s = mean ḡ_K the stabilization constant.

    Raises:
        EstimationError: Nobody followed the regimen
    """
    if prop.gbar.shape != (dataset.n, dataset.k):
        raise ArgumentError(f"Propensity matrix has shape {prop.gbar.shape}, expected {(dataset.n, dataset.k)}")
    follows = dataset.followers(regimen, dataset.k)
    if not follows.any():
        raise EstimationError(f"No subject follows {regimen.label()} through visit {dataset.k}")

    g_k = prop.gbar[:, -1]
    truncated = int(np.sum(follows & (g_k < prop.truncation)))
    g_k = np.maximum(g_k, prop.truncation)
    y = np.where(follows, dataset.y, 0.0)
    stabilizer = float(g_k.mean())
    weights = np.where(follows, stabilizer / g_k, 0.0)

    psi = float(np.sum(weights * y) / np.sum(weights))
    ic = weights * (y - psi) / weights.mean()
    ic = np.where(follows, ic, 0.0)

    diagnostics = {
        "followers": follower_counts(dataset, regimen),
        "stabilizer": stabilizer,
        "max_weight": float(weights.max()),
        "truncated_at_estimation": truncated,
        **prop.diagnostics(),
    }
    report = EstimateReport.point(EstimatorMethod.IPTW, regimen.label(), psi, dataset, diagnostics)
    return report.with_influence_curve(InfluenceCurveValues(ic.reshape(-1, 1)))
