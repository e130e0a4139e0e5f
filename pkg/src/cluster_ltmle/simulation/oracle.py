# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T14:20:16
# Last Updated: 2026-10-19T14:20:16
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Monte Carlo truth of ψ_ā and δ under the simulation DGP.

Treatment is forced to ā and censoring switched off. Each draw is a fresh
subject from a fresh cluster, so (W, U) follow their marginal law. The
counterfactual count is replaced by its conditional mean given (W, U),
Σ_t P(L_t = 1 | W, U, x_t(ā)), which leaves the target unchanged and keeps
the oracle smooth in the coefficients for calibration.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.special import expit

from ..data.records import Regimen
from ..utils.exceptions import ArgumentError
from .dgp import VISITS, DgpConfig

SHARD_SIZE = 100_000
DEFAULT_DRAWS = 1_000_000


@dataclass(frozen=True)
class OracleResult:
    value: float
    mc_se: float
    n_mc: int


def _treated_visits(regimen: Regimen) -> np.ndarray:
    """x_t(ā) for t = 1..3: treated visits among the previous two."""
    if regimen.length != VISITS - 1:
        raise ArgumentError(f"The simulation DGP needs regimens of length {VISITS - 1}, got {regimen.label()}")
    a = regimen.a_bar
    return np.array([0.0, float(a[0]), float(a[0] + a[1])])


def _shard_moments(
    cfg: DgpConfig, first: Regimen, second: Optional[Regimen], size: int, seed: int, shard: int
) -> Tuple[float, float]:
    """Sum and sum of squares of the per-draw value on one shard."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(shard)]))
    w = rng.normal(0.0, cfg.cluster_sd_w, size) + rng.normal(0.0, cfg.within_sd_w, size)
    u = rng.normal(0.0, cfg.cluster_sd_u, size) + rng.normal(0.0, cfg.within_sd_u, size)

    def expected_count(regimen: Regimen) -> np.ndarray:
        return sum(expit(cfg.infection.logit(w, u, x)) for x in _treated_visits(regimen))

    values = expected_count(first)
    if second is not None:
        values = values - expected_count(second)
    return float(values.sum()), float(np.square(values).sum())


def _oracle(
    cfg: DgpConfig, first: Regimen, second: Optional[Regimen], n_mc: int, seed: int, workers: int
) -> OracleResult:
    if n_mc < 2:
        raise ArgumentError(f"Need at least 2 Monte Carlo draws, got {n_mc}")
    n_shards = math.ceil(n_mc / SHARD_SIZE)
    sizes = [min(SHARD_SIZE, n_mc - s * SHARD_SIZE) for s in range(n_shards)]
    if workers == 1:
        moments = [_shard_moments(cfg, first, second, size, seed, s) for s, size in enumerate(sizes)]
    else:
        moments = Parallel(n_jobs=workers, backend="loky")(
            delayed(_shard_moments)(cfg, first, second, size, seed, s) for s, size in enumerate(sizes)
        )
    total = sum(m[0] for m in moments)
    squares = sum(m[1] for m in moments)
    mean = total / n_mc
    variance = max(squares / n_mc - mean**2, 0.0) * n_mc / (n_mc - 1)
    return OracleResult(value=mean, mc_se=math.sqrt(variance / n_mc), n_mc=n_mc)


def true_value_oracle(
    cfg: DgpConfig, regimen: Regimen, n_mc: int = DEFAULT_DRAWS, seed: int = 0, workers: int = 1
) -> OracleResult:
    """E(Y_ā) with its Monte Carlo standard error."""
    return _oracle(cfg, regimen, None, n_mc, seed, workers)


def oracle_contrast(
    cfg: DgpConfig,
    first: Regimen,
    second: Regimen,
    n_mc: int = DEFAULT_DRAWS,
    seed: int = 0,
    workers: int = 1,
) -> OracleResult:
    """δ = E(Y_first) - E(Y_second) on common random numbers."""
    return _oracle(cfg, first, second, n_mc, seed, workers)
