# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T09:12:40
# Last Updated: 2026-10-19T09:12:40
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Type definitions and enumerations for cluster-ltmle."""

from enum import Enum
from typing import Dict, Set


class EstimatorMethod(str, Enum):
    """Estimators of the counterfactual mean under a fixed regimen."""

    TMLE = "tmle"
    SL_TMLE = "sl-tmle"
    GCOMP = "gcomp"
    GCOMP_SEQ = "gcomp-seq"
    IPTW = "iptw"

    @classmethod
    def get_bootstrap_methods(cls) -> Set["EstimatorMethod"]:
        """Methods whose standard error comes from the pairs cluster bootstrap."""
        return {cls.GCOMP, cls.GCOMP_SEQ}

    @classmethod
    def get_influence_curve_methods(cls) -> Set["EstimatorMethod"]:
        """Methods whose standard error comes from the clustered sandwich."""
        return {cls.TMLE, cls.SL_TMLE, cls.IPTW}

    @property
    def uses_bootstrap(self) -> bool:
        return self in self.get_bootstrap_methods()

    @property
    def display_name(self) -> str:
        """Row label used in the printed tables."""
        return _DISPLAY_NAMES[self]

    @classmethod
    def valid_names(cls) -> list:
        return [method.value for method in cls]


_DISPLAY_NAMES: Dict[EstimatorMethod, str] = {
    EstimatorMethod.GCOMP: "G-comp. (likelihood)",
    EstimatorMethod.GCOMP_SEQ: "G-comp. (sequential)",
    EstimatorMethod.IPTW: "IPTW",
    EstimatorMethod.TMLE: "Parametric TMLE",
    EstimatorMethod.SL_TMLE: "SL TMLE",
}


class LearnerKind(str, Enum):
    """Regression learners available to the estimators."""

    LOGISTIC = "logistic"
    MEAN = "mean"
    KNN = "knn"
    STRATA = "strata"
    BASIS = "basis"
    ENSEMBLE = "ensemble"


class Conditioning(str, Enum):
    """How nested regressions condition on past treatment."""

    SUBSET = "subset"  # fit among regimen followers only
    POOLED = "pooled"  # fit among all uncensored, evaluate at the regimen


class IntervalKind(str, Enum):
    """Construction of a confidence interval."""

    WALD = "wald"
    PERCENTILE = "percentile"
    NONE = "none"


class ScenarioName(str, Enum):
    """Covariate policies of the simulation study."""

    UNMEASURED = "unmeasured"
    CLUSTER_ADJUSTED = "cluster_adjusted"
    FULLY_ADJUSTED = "fully_adjusted"
    TRANSFORMED = "transformed"

    @property
    def heading(self) -> str:
        return {
            ScenarioName.UNMEASURED: "Unmeasured confounder",
            ScenarioName.CLUSTER_ADJUSTED: "Unmeasured confounder, adjusting for cluster",
            ScenarioName.FULLY_ADJUSTED: "Adjusting for all confounders",
            ScenarioName.TRANSFORMED: "Transformed confounders",
        }[self]


class Command(str, Enum):
    """CLI sub-commands."""

    ESTIMATE = "estimate"
    SIMULATE = "simulate"
    CALIBRATE = "calibrate"
    REPORT = "report"
