# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T15:03:12
# Last Updated: 2026-10-19T15:03:12
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Covariate policies of the simulation study and the replicate loop."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict

from ..data.records import Dataset
from ..estimators import EstimatorSettings, run_contrast
from ..types import EstimatorMethod, ScenarioName
from ..utils.exceptions import LtmleError, SimulationError
from ..utils.logging import get_logger
from ..utils.seeding import derive_seed
from .calibration import ALWAYS_TREAT, NEVER_TREAT
from .dgp import DgpConfig, generate_dataset, kang_transform
from .metrics import MethodSummary, summarize_method
from .oracle import DEFAULT_DRAWS, oracle_contrast

logger = get_logger(__name__)

MAX_FAILURE_RATE = 0.05
DEFAULT_REPS = 200


class Scenario(BaseModel):
    """Which baseline covariates the analyst's models see."""

    model_config = ConfigDict(frozen=True)

    name: ScenarioName

    @property
    def heading(self) -> str:
        return self.name.heading

    def apply(self, dataset: Dataset) -> Dataset:
        """Replace the generated (w, u) covariates by the analysis covariates."""
        w = dataset.w[:, 0]
        u = dataset.w[:, 1]
        if self.name == ScenarioName.UNMEASURED:
            return dataset.with_covariates(w.reshape(-1, 1), ["w"])
        if self.name == ScenarioName.FULLY_ADJUSTED:
            return dataset.with_covariates(np.column_stack([w, u]), ["w", "u"])
        if self.name == ScenarioName.TRANSFORMED:
            w_star, u_star = kang_transform(w, u)
            return dataset.with_covariates(np.column_stack([w_star, u_star]), ["w_star", "u_star"])
        # cluster_adjusted: indicator per cluster, the first one as reference
        dummies = pd.get_dummies(pd.Series(dataset.cluster_codes), prefix="cluster", drop_first=True, dtype=float)
        return dataset.with_covariates(
            np.column_stack([w, dummies.to_numpy()]), ["w", *dummies.columns.astype(str)]
        )


@dataclass
class ScenarioReport:
    """Per-method summaries against the oracle δ, plus raw replicate rows."""

    scenario: ScenarioName
    truth: float
    reps: int
    summaries: List[MethodSummary]
    replicates: pd.DataFrame = field(repr=False)

    def to_frame(self) -> pd.DataFrame:
        rows = [summary.to_row() for summary in self.summaries]
        frame = pd.DataFrame(rows)
        frame.insert(0, "scenario", self.scenario.value)
        frame["truth"] = self.truth
        return frame


def _run_replicate(
    scenario: Scenario,
    methods: Sequence[EstimatorMethod],
    cfg: DgpConfig,
    settings: EstimatorSettings,
    seed: int,
    replicate: int,
) -> List[Dict[str, object]]:
    dataset = scenario.apply(generate_dataset(cfg, derive_seed(seed, replicate)))
    replicate_settings = settings.model_copy(update={"seed": derive_seed(seed, replicate, 1) % (2**32), "workers": 1})
    rows = []
    for method in methods:
        row: Dict[str, object] = {"replicate": replicate, "method": method.value}
        try:
            _, _, delta = run_contrast(method, dataset, ALWAYS_TREAT, NEVER_TREAT, replicate_settings)
            row.update(estimate=delta.psi_hat, se=delta.se, ci_lo=delta.ci[0], ci_hi=delta.ci[1])
        except (LtmleError, ArithmeticError, ValueError, np.linalg.LinAlgError) as error:
            logger.warning(f"Replicate {replicate} {method.value} failed: {error}")
            row.update(estimate=np.nan, se=np.nan, ci_lo=np.nan, ci_hi=np.nan)
        rows.append(row)
    return rows


def run_scenario(
    scenario: Scenario,
    methods: Sequence[EstimatorMethod],
    reps: int,
    cfg: DgpConfig,
    seed: int,
    settings: Optional[EstimatorSettings] = None,
    truth: Optional[float] = None,
    workers: int = 1,
    oracle_draws: int = DEFAULT_DRAWS,
) -> ScenarioReport:
    """Simulate ``reps`` data sets and estimate δ = ψ_(1,1) - ψ_(0,0) with every method.

    Raises:
        SimulationError: More than 5% of a method's replicates failed
    """
    if reps < 1:
        raise SimulationError(f"Need at least one replicate, got {reps}")
    settings = settings or EstimatorSettings()
    if truth is None:
        truth = cfg.calibration.delta if cfg.calibration else oracle_contrast(
            cfg, ALWAYS_TREAT, NEVER_TREAT, oracle_draws, seed
        ).value
    logger.info(f"Scenario {scenario.name.value}: {reps} replicates, methods {[m.value for m in methods]}, truth {truth:.4f}")

    if workers == 1:
        batches = [_run_replicate(scenario, methods, cfg, settings, seed, r) for r in range(reps)]
    else:
        batches = Parallel(n_jobs=workers, backend="loky")(
            delayed(_run_replicate)(scenario, methods, cfg, settings, seed, r) for r in range(reps)
        )
    replicates = pd.DataFrame([row for batch in batches for row in batch])

    summaries = []
    for method in methods:
        rows = replicates[replicates["method"] == method.value]
        summary = summarize_method(method, rows, truth)
        if summary.failures > MAX_FAILURE_RATE * reps:
            raise SimulationError(
                f"{summary.failures} of {reps} replicates failed for {method.value} in scenario {scenario.name.value}",
                details={"method": method.value, "failures": summary.failures},
            )
        summaries.append(summary)
    return ScenarioReport(scenario=scenario.name, truth=float(truth), reps=reps, summaries=summaries, replicates=replicates)
