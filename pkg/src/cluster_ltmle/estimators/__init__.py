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

"""Estimators of counterfactual means under fixed regimens and their contrasts."""

from .contrast import contrast
from .gcomp import gcomp_likelihood
from .iptw import iptw
from .propensity import PropensityFits, cumulative_propensity, fit_propensity
from .report import EstimateReport
from .runner import SL_LIBRARY, EstimatorSettings, point_estimate, run_contrast, run_method
from .sequential import SequentialFits, backward_fits, gcomp_sequential
from .tmle import clever_covariate, fluctuate, tmle

__all__ = [
    "SL_LIBRARY",
    "EstimateReport",
    "EstimatorSettings",
    "PropensityFits",
    "SequentialFits",
    "backward_fits",
    "clever_covariate",
    "contrast",
    "cumulative_propensity",
    "fit_propensity",
    "fluctuate",
    "gcomp_likelihood",
    "gcomp_sequential",
    "iptw",
    "point_estimate",
    "run_contrast",
    "run_method",
    "tmle",
]
