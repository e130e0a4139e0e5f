# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T11:41:20
# Last Updated: 2026-10-19T11:41:20
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Efficient influence curve of ψ_ā evaluated at the targeted fits."""

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..utils.exceptions import ArgumentError, TargetingStateError

if TYPE_CHECKING:
    from ..data.records import Dataset, Regimen
    from ..data.scaling import OutcomeScaler
    from ..estimators.propensity import PropensityFits
    from ..estimators.sequential import SequentialFits


@dataclass(frozen=True)
class InfluenceCurveValues:
    """Per-subject components D_0..D_K (columns) on the outcome scale."""

    d_components: np.ndarray

    @property
    def d_total(self) -> np.ndarray:
        return self.d_components.sum(axis=1)

    @property
    def component_means(self) -> np.ndarray:
        return self.d_components.mean(axis=0)

    def __sub__(self, other: "InfluenceCurveValues") -> "InfluenceCurveValues":
        if self.d_components.shape != other.d_components.shape:
            raise ArgumentError("Influence curves come from different data")
        return InfluenceCurveValues(self.d_components - other.d_components)


def efficient_influence_curve(
    dataset: "Dataset",
    seq: "SequentialFits",
    prop: "PropensityFits",
    regimen: "Regimen",
    psi_hat: float,
    scaler: "OutcomeScaler",
) -> InfluenceCurveValues:
    """D = D_0 + Σ_t D_t with D_t = I_t / ḡ_t · (Q̄¹_{t+1} - Q̄¹_t), D_0 = Q̄¹_1 - ψ.

    Components are computed on the [0, 1] scale and multiplied by (hi - lo).
    ``psi_hat`` is on the outcome scale.

    Raises:
        TargetingStateError: ``seq`` has not been fluctuated
    """
    if seq.qbar_star is None:
        raise TargetingStateError("Influence curve needs targeted fits (run tmle first)")
    k = dataset.k
    q = seq.qbar_star
    psi_scaled = float(scaler.scale(psi_hat))
    components = np.zeros((dataset.n, k + 1))
    components[:, 0] = q[:, 0] - psi_scaled
    for t in range(1, k + 1):
        follows = dataset.followers(regimen, t)
        residual = np.where(follows, q[:, t] - q[:, t - 1], 0.0)
        components[:, t] = np.where(follows, residual / prop.gbar[:, t - 1], 0.0)
    return InfluenceCurveValues(components * scaler.width)
