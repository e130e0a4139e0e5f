# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T12:27:02
# Last Updated: 2026-10-19T12:27:02
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Result container shared by all estimators."""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..data.records import Dataset
from ..inference import BootstrapResult, InfluenceCurveValues, clustered_sandwich, wald_ci
from ..types import EstimatorMethod, IntervalKind

NAN_CI = (float("nan"), float("nan"))


@dataclass(frozen=True)
class EstimateReport:
    """Point estimate of ψ_ā (or a contrast δ) with its uncertainty."""

    method: EstimatorMethod
    target: str
    psi_hat: float
    se: float = float("nan")
    ci: Tuple[float, float] = NAN_CI
    interval: IntervalKind = IntervalKind.NONE
    n: int = 0
    clusters: int = 0
    fingerprint: str = ""
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    influence_curve: Optional[InfluenceCurveValues] = field(default=None, repr=False)
    cluster_labels: Optional[np.ndarray] = field(default=None, repr=False)
    bootstrap: Optional[BootstrapResult] = field(default=None, repr=False)

    @classmethod
    def point(
        cls,
        method: EstimatorMethod,
        target: str,
        psi_hat: float,
        dataset: Dataset,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> "EstimateReport":
        return cls(
            method=method,
            target=target,
            psi_hat=float(psi_hat),
            n=dataset.n,
            clusters=dataset.m,
            fingerprint=dataset.fingerprint,
            diagnostics=dict(diagnostics or {}),
            cluster_labels=dataset.cluster_ids,
        )

    def with_influence_curve(self, ic: InfluenceCurveValues) -> "EstimateReport":
        """Attach an influence curve and fill se / Wald CI from the clustered sandwich."""
        variance = clustered_sandwich(ic, self.cluster_labels)
        diagnostics = {**self.diagnostics, "variance_floored": variance.floored}
        return replace(
            self,
            se=variance.se,
            ci=wald_ci(self.psi_hat, variance.se),
            interval=IntervalKind.WALD,
            influence_curve=ic,
            diagnostics=diagnostics,
        )

    def with_bootstrap(self, result: BootstrapResult) -> "EstimateReport":
        """Attach bootstrap replicates; se is their sd and the CI their percentiles."""
        diagnostics = {**self.diagnostics, "bootstrap_b": result.b, "bootstrap_failures": result.failures}
        return replace(
            self,
            se=result.se,
            ci=result.percentile_ci,
            interval=IntervalKind.PERCENTILE,
            bootstrap=result,
            diagnostics=diagnostics,
        )

    def to_row(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "label": self.method.display_name,
            "target": self.target,
            "estimate": self.psi_hat,
            "se": self.se,
            "ci_lo": self.ci[0],
            "ci_hi": self.ci[1],
            "interval": self.interval.value,
            "n": self.n,
            "clusters": self.clusters,
        }
