# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T13:38:55
# Last Updated: 2026-10-19T13:38:55
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Dispatch from an estimator name to a complete EstimateReport."""

from functools import partial
from typing import Any, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..data.records import Dataset, Regimen, impute_after_censoring
from ..data.scaling import constant_outcome, make_scaler
from ..inference import pairs_cluster_bootstrap
from ..learners import LearnerSpec, parse_learners
from ..types import Conditioning, EstimatorMethod, LearnerKind
from ..utils.logging import get_logger
from .contrast import contrast
from .gcomp import gcomp_likelihood
from .iptw import iptw
from .propensity import DEFAULT_TRUNCATION, fit_propensity
from .report import EstimateReport
from .sequential import gcomp_sequential
from .tmle import tmle

logger = get_logger(__name__)

SL_LIBRARY = ("logistic", "knn(k=30)", "basis(degree=3)")


class EstimatorSettings(BaseModel):
    """Learners and tuning shared by every estimator in a run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    q_learner: LearnerSpec = Field(default=LearnerSpec(kind=LearnerKind.LOGISTIC))
    g_learner: LearnerSpec = Field(default=LearnerSpec(kind=LearnerKind.LOGISTIC))
    sl_library: LearnerSpec = Field(default_factory=lambda: parse_learners(list(SL_LIBRARY)))
    conditioning: Conditioning = Conditioning.SUBSET
    truncation: float = Field(DEFAULT_TRUNCATION, ge=0.0, lt=1.0)
    bootstrap: int = Field(200, ge=0, description="Cluster bootstrap replicates for G-computation (0 = off)")
    seed: int = Field(0, ge=0)
    workers: int = Field(1, description="joblib workers for bootstrap replicates (-1 = all cores)")
    increment: bool = Field(False, description="Likelihood G-computation on Y - Σ L_t")

    @field_validator("q_learner", "g_learner", "sl_library", mode="before")
    @classmethod
    def parse_spec(cls, value: Any) -> Any:
        if isinstance(value, (str, list, tuple)):
            return parse_learners(value)
        return value

    def learners_for(self, method: EstimatorMethod) -> Tuple[LearnerSpec, LearnerSpec]:
        """(Q̄ learner, propensity learner) used by ``method``."""
        if method == EstimatorMethod.SL_TMLE:
            return self.sl_library, self.sl_library
        return self.q_learner, self.g_learner


def point_estimate(dataset: Dataset, method: EstimatorMethod, regimen: Regimen, settings: EstimatorSettings) -> float:
    """ψ̂ only; used inside bootstrap replicates."""
    return run_method(method, dataset, regimen, settings, with_bootstrap=False).psi_hat


def run_method(
    method: EstimatorMethod,
    dataset: Dataset,
    regimen: Regimen,
    settings: EstimatorSettings,
    with_bootstrap: bool = True,
) -> EstimateReport:
    """Estimate ψ_ā with ``method``, including its standard error."""
    if not dataset.is_canonical:
        dataset = impute_after_censoring(dataset)
    # estimators short-circuit a constant outcome, which has no scale
    scaler = None if constant_outcome(dataset) is not None else make_scaler(dataset)
    q_learner, g_learner = settings.learners_for(method)

    if method in (EstimatorMethod.TMLE, EstimatorMethod.SL_TMLE, EstimatorMethod.IPTW):
        prop = fit_propensity(dataset, regimen, g_learner, settings.truncation, settings.seed)
        if method == EstimatorMethod.IPTW:
            return iptw(dataset, regimen, prop)
        report, _ = tmle(dataset, regimen, q_learner, prop, scaler, settings.conditioning, settings.seed, method)
        return report

    if method == EstimatorMethod.GCOMP:
        report = gcomp_likelihood(
            dataset, regimen, q_learner, q_learner, scaler, increment=settings.increment, seed=settings.seed
        )
    else:
        report = gcomp_sequential(dataset, regimen, q_learner, settings.conditioning, scaler, settings.seed)

    if with_bootstrap and settings.bootstrap >= 2:
        logger.info(f"{method.display_name} {regimen.label()}: {settings.bootstrap} cluster bootstrap replicates")
        result = pairs_cluster_bootstrap(
            dataset,
            partial(point_estimate, method=method, regimen=regimen, settings=settings),
            b=settings.bootstrap,
            seed=settings.seed,
            workers=settings.workers,
        )
        report = report.with_bootstrap(result)
    return report


def run_contrast(
    method: EstimatorMethod,
    dataset: Dataset,
    first: Regimen,
    second: Regimen,
    settings: EstimatorSettings,
    with_bootstrap: bool = True,
) -> Tuple[EstimateReport, EstimateReport, EstimateReport]:
    """Both regimen estimates and δ̂ = ψ̂_first - ψ̂_second."""
    if not dataset.is_canonical:
        dataset = impute_after_censoring(dataset)
    report_1 = run_method(method, dataset, first, settings, with_bootstrap)
    report_2 = run_method(method, dataset, second, settings, with_bootstrap)
    return report_1, report_2, contrast(report_1, report_2)
