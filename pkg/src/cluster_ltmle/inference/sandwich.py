# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T11:30:48
# Last Updated: 2026-10-19T11:30:48
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Cluster-robust variance of an asymptotically linear estimator."""

from dataclasses import dataclass
from typing import Any, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..utils.exceptions import ArgumentError
from ..utils.logging import get_logger

logger = get_logger(__name__)

Z_975 = 1.96
VARIANCE_FLOOR_FACTOR = 1e-6

ClusterAssignment = Union[Mapping[Any, Sequence[int]], Sequence[Any], np.ndarray]


@dataclass(frozen=True)
class ClusterVariance:
    """Per-cluster moments and the resulting variance of the estimator."""

    rho_m: np.ndarray
    sigma2_m: np.ndarray
    n_m: np.ndarray
    sigma2: float
    floored: bool = False

    @property
    def se(self) -> float:
        return float(np.sqrt(self.sigma2))

    @property
    def n(self) -> int:
        return int(self.n_m.sum())


def _cluster_codes(clusters: ClusterAssignment, n: int) -> np.ndarray:
    if isinstance(clusters, Mapping):
        codes = np.full(n, -1, dtype=np.int64)
        for code, rows in enumerate(clusters.values()):
            codes[np.asarray(rows, dtype=np.int64)] = code
        if (codes < 0).any():
            raise ArgumentError("Every subject must belong to a cluster")
        return codes
    labels = np.asarray(clusters, dtype=object).reshape(-1)
    if len(labels) != n:
        raise ArgumentError(f"Cluster labels have length {len(labels)}, expected {n}")
    codes, _ = pd.factorize(pd.Series(labels, dtype=object), sort=False)
    return codes.astype(np.int64)


def clustered_sandwich(ic: Any, clusters: ClusterAssignment) -> ClusterVariance:
    """σ² = (1/n²) Σ_m [n_m(n_m - 1) ρ_m + n_m σ²_m].

    ρ_m is the mean of D_i D_j over ordered pairs i ≠ j in cluster m (zero for
    singletons) and σ²_m the mean of D_i² in m. If σ² falls below
    1e-6 · (1/n²) Σ_m n_m σ²_m it is set to that value and flagged.

    Args:
        ic: Influence curve values, an array or anything with ``d_total``
        clusters: Cluster id per subject, or a mapping cluster id → rows
    """
    d = np.asarray(getattr(ic, "d_total", ic), dtype=float).reshape(-1)
    n = len(d)
    if n == 0:
        raise ArgumentError("Empty influence curve")
    codes = _cluster_codes(clusters, n)
    n_clusters = int(codes.max()) + 1
    n_m = np.bincount(codes, minlength=n_clusters).astype(float)
    sums = np.bincount(codes, weights=d, minlength=n_clusters)
    squares = np.bincount(codes, weights=d * d, minlength=n_clusters)

    pairs = n_m * (n_m - 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        sigma2_m = np.where(n_m > 0, squares / np.where(n_m > 0, n_m, 1.0), 0.0)
        rho_m = np.where(pairs > 0, (sums**2 - squares) / np.where(pairs > 0, pairs, 1.0), 0.0)

    sigma2 = float(np.sum(pairs * rho_m + n_m * sigma2_m) / n**2)
    floor = float(np.sum(n_m * sigma2_m) / n**2) * VARIANCE_FLOOR_FACTOR
    floored = sigma2 < floor
    if floored:
        logger.warning(f"Clustered variance {sigma2:.3e} below floor; using {floor:.3e}")
        sigma2 = floor
    return ClusterVariance(rho_m=rho_m, sigma2_m=sigma2_m, n_m=n_m.astype(np.int64), sigma2=sigma2, floored=floored)


def wald_ci(psi_hat: float, se: float, z: float = Z_975) -> Tuple[float, float]:
    """(ψ̂ - z·se, ψ̂ + z·se)."""
    if se < 0:
        raise ArgumentError(f"Standard error must be nonnegative, got {se}")
    return (psi_hat - z * se, psi_hat + z * se)
