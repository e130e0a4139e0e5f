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

"""
cluster-ltmle

Counterfactual mean outcomes under fixed treatment regimens from clustered
longitudinal data with time-dependent confounding and informative censoring.

This package provides:
- Likelihood and sequential G-computation
- Stabilized inverse probability of treatment weighting
- Longitudinal targeted maximum likelihood estimation with Super Learner
- Cluster-robust sandwich variance and pairs cluster bootstrap
- A Monte Carlo simulation engine with four confounding scenarios
"""

__version__ = "1.0.0"
__author__ = "Bivex"
__email__ = "support@b-b.top"
__license__ = "MIT"

from .data import Dataset, Regimen, impute_after_censoring, load_dataset
from .types import EstimatorMethod

__all__ = ["Dataset", "EstimatorMethod", "Regimen", "impute_after_censoring", "load_dataset"]
