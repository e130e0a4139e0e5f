# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T11:55:03
# Last Updated: 2026-10-19T11:55:03
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Pairs cluster bootstrap: resample whole clusters with replacement."""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..data.records import Dataset
from ..utils.exceptions import ArgumentError, BootstrapError, LtmleError
from ..utils.logging import get_logger
from ..utils.seeding import make_rng

logger = get_logger(__name__)

DEFAULT_REPLICATES = 200
MAX_FAILURE_RATE = 0.10
PERCENTILES = (0.025, 0.975)

Estimator = Callable[[Dataset], float]


@dataclass(frozen=True)
class BootstrapResult:
    """Replicate estimates in replicate order (NaN where a replicate failed)."""

    replicates: np.ndarray
    seed: int

    @property
    def b(self) -> int:
        return len(self.replicates)

    @property
    def finite(self) -> np.ndarray:
        return self.replicates[np.isfinite(self.replicates)]

    @property
    def failures(self) -> int:
        return int(self.b - self.finite.size)

    @property
    def se(self) -> float:
        values = self.finite
        return float(np.std(values, ddof=1)) if values.size >= 2 else float("nan")

    @property
    def percentile_ci(self) -> Tuple[float, float]:
        """2.5th and 97.5th percentiles, linear interpolation between order statistics."""
        values = self.finite
        if values.size == 0:
            return (float("nan"), float("nan"))
        lo, hi = np.quantile(values, PERCENTILES, method="linear")
        return (float(lo), float(hi))

    def paired_difference(self, other: "BootstrapResult") -> "BootstrapResult":
        """Replicate-wise difference of two runs that shared the same resamples."""
        if other.seed != self.seed or other.b != self.b:
            raise ArgumentError("Bootstrap runs are not paired (different seed or B)")
        return BootstrapResult(replicates=self.replicates - other.replicates, seed=self.seed)


def resample_clusters(dataset: Dataset, seed: int, replicate: int) -> Dataset:
    """Draw M clusters with replacement; repeated draws become distinct clusters."""
    rng = make_rng(seed, replicate)
    groups = list(dataset.cluster_index.values())
    draws = rng.integers(0, len(groups), size=len(groups))
    rows = np.concatenate([groups[j] for j in draws])
    labels = np.concatenate([np.full(len(groups[j]), position) for position, j in enumerate(draws)])
    return dataset.subset(rows, cluster_ids=labels.astype(object))


def _run_replicate(dataset: Dataset, estimator: Estimator, seed: int, replicate: int) -> float:
    try:
        return float(estimator(resample_clusters(dataset, seed, replicate)))
    except (LtmleError, ArithmeticError, ValueError, np.linalg.LinAlgError) as error:
        logger.debug(f"Bootstrap replicate {replicate} failed: {error}")
        return float("nan")


def pairs_cluster_bootstrap(
    dataset: Dataset,
    estimator: Estimator,
    b: int = DEFAULT_REPLICATES,
    seed: int = 0,
    workers: int = 1,
    max_failure_rate: float = MAX_FAILURE_RATE,
) -> BootstrapResult:
    """Re-run ``estimator`` end to end on B cluster resamples.

    Replicate r depends only on (seed, r), so results do not depend on
    ``workers``.

    Raises:
        BootstrapError: More than ``max_failure_rate`` of replicates failed
    """
    if b < 2:
        raise ArgumentError(f"Need at least 2 bootstrap replicates, got {b}")
    if workers == 1:
        values = [_run_replicate(dataset, estimator, seed, r) for r in range(b)]
    else:
        values = Parallel(n_jobs=workers, backend="loky")(
            delayed(_run_replicate)(dataset, estimator, seed, r) for r in range(b)
        )
    result = BootstrapResult(replicates=np.asarray(values, dtype=float), seed=seed)
    if result.failures:
        logger.warning(f"{result.failures} of {b} bootstrap replicates failed")
    if result.failures > max_failure_rate * b:
        raise BootstrapError(
            f"{result.failures} of {b} bootstrap replicates failed (limit {max_failure_rate:.0%})",
            failures=result.failures,
            replicates=b,
        )
    return result
