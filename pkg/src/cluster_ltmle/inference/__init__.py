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

"""Influence curves, clustered sandwich variance and the cluster bootstrap."""

from .bootstrap import BootstrapResult, pairs_cluster_bootstrap, resample_clusters
from .influence import InfluenceCurveValues, efficient_influence_curve
from .sandwich import ClusterVariance, clustered_sandwich, wald_ci

__all__ = [
    "BootstrapResult",
    "ClusterVariance",
    "InfluenceCurveValues",
    "clustered_sandwich",
    "efficient_influence_curve",
    "pairs_cluster_bootstrap",
    "resample_clusters",
    "wald_ci",
]
