# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T14:02:33
# Last Updated: 2026-10-19T14:02:33
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Three-visit clustered data-generating process.

Per subject, in time order: C_1, L_1, A_1, C_2, L_2, A_2, C_3, L_3 and
Y = L_1 + L_2 + L_3. Baseline W and the confounder U are Gaussian around
cluster-specific means; U_c denotes the cluster mean of U. All conditional
laws are logistic:

* infection L_t | W, U, x_t with x_t the number of treated visits among the
  previous two (x_1 = 0, x_2 = A_1, x_3 = A_1 + A_2)
* treatment A_t | W, U_c, L_t, with A_2 = 0 whenever A_1 = 0
* censoring C_t | W, U_c, A_{t-1}, L_{t-1}

Treatment and censoring see U only through U_c, so cluster indicators
remove the confounding by U while adjusting for W alone does not.
"""

from pathlib import Path
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit

from ..data.records import Dataset
from ..utils.config_parser import load_config_file
from ..utils.logging import get_logger

logger = get_logger(__name__)

VISITS = 3
COVARIATE_NAMES = ("w", "u")


class InfectionModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    intercept: float = -2.0
    w: float = 0.2
    u: float = -0.42895
    treatment: float = Field(-0.095, description="Per treated visit among the previous two")

    def logit(self, w: np.ndarray, u: np.ndarray, treated_visits: np.ndarray) -> np.ndarray:
        return self.intercept + self.w * w + self.u * u + self.treatment * treated_visits


class TreatmentModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    intercepts: Tuple[float, float] = (1.0, 0.5)
    w: float = 0.6
    u_cluster: float = Field(2.0, description="Coefficient of the cluster mean of U")
    infection: float = Field(-1.0, description="Current-visit infection lowers continuation")

    def logit(self, visit: int, w: np.ndarray, u_cluster: np.ndarray, infection: np.ndarray) -> np.ndarray:
        return self.intercepts[visit - 1] + self.w * w + self.u_cluster * u_cluster + self.infection * infection


class CensoringModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    intercept: float = -3.0
    w: float = 0.2
    u_cluster: float = Field(-0.5, description="Coefficient of the cluster mean of U")
    treatment: float = Field(-0.5, description="Continued treatment lowers dropout")
    infection: float = Field(0.7, description="Prior infection raises dropout")

    def baseline_logit(self, w: np.ndarray, u_cluster: np.ndarray) -> np.ndarray:
        return self.intercept + self.w * w + self.u_cluster * u_cluster

    def logit(self, w: np.ndarray, u_cluster: np.ndarray, treatment: np.ndarray, infection: np.ndarray) -> np.ndarray:
        return self.baseline_logit(w, u_cluster) + self.treatment * treatment + self.infection * infection


class CalibrationRecord(BaseModel):
    """Oracle check stored with a calibrated configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    target: float
    delta: float
    mc_se: float
    n_mc: int
    seed: int


class DgpConfig(BaseModel):
    """Sizes, cluster structure and coefficients of the simulation DGP."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    clusters: int = Field(31, ge=2)
    per_cluster: int = Field(500, ge=1)
    cluster_sd_w: float = Field(0.5, ge=0.0)
    cluster_sd_u: float = Field(0.5, ge=0.0)
    within_sd_w: float = Field(2.0, gt=0.0)
    within_sd_u: float = Field(1.0, gt=0.0)
    infection: InfectionModel = Field(default_factory=InfectionModel)
    treatment: TreatmentModel = Field(default_factory=TreatmentModel)
    censoring: CensoringModel = Field(default_factory=CensoringModel)
    calibration: Optional[CalibrationRecord] = None

    @property
    def n(self) -> int:
        return self.clusters * self.per_cluster

    def with_treatment_effect(self, coefficient: float) -> "DgpConfig":
        """Copy with a new infection-model treatment coefficient (calibration drops the old record)."""
        infection = self.infection.model_copy(update={"treatment": float(coefficient)})
        return self.model_copy(update={"infection": infection, "calibration": None})

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "DgpConfig":
        raw = load_config_file(path)
        return cls.model_validate(raw.get("dgp", raw))


def _bernoulli(rng: np.random.Generator, logits: np.ndarray) -> np.ndarray:
    return (rng.random(logits.shape) < expit(logits)).astype(np.int8)


class Baseline(NamedTuple):
    """Cluster label, W, U and the cluster mean U_c per subject."""

    cluster: np.ndarray
    w: np.ndarray
    u: np.ndarray
    u_cluster: np.ndarray


def draw_baseline(cfg: DgpConfig, rng: np.random.Generator) -> Baseline:
    """Cluster labels and (W, U) with cluster-specific means."""
    cluster = np.repeat(np.arange(1, cfg.clusters + 1), cfg.per_cluster)
    mean_w = rng.normal(0.0, cfg.cluster_sd_w, cfg.clusters)
    mean_u = rng.normal(0.0, cfg.cluster_sd_u, cfg.clusters)
    w = mean_w[cluster - 1] + rng.normal(0.0, cfg.within_sd_w, cfg.n)
    u_cluster = mean_u[cluster - 1]
    u = u_cluster + rng.normal(0.0, cfg.within_sd_u, cfg.n)
    return Baseline(cluster, w, u, u_cluster)


def generate_dataset(cfg: DgpConfig, seed: int) -> Dataset:
    """Simulate one canonical data set with covariates (w, u)."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    cluster, w, u, u_cluster = draw_baseline(cfg, rng)
    n = cfg.n
    c = np.zeros((n, VISITS), dtype=np.int8)
    l = np.zeros((n, VISITS - 1))
    a = np.zeros((n, VISITS - 1), dtype=np.int8)
    infections = np.zeros((n, VISITS), dtype=np.int8)

    at_risk = np.ones(n, dtype=bool)
    previous_a = np.zeros(n, dtype=np.int8)
    previous_l = np.zeros(n, dtype=np.int8)
    treated_visits = np.zeros(n)
    for t in range(1, VISITS + 1):
        if t == 1:
            censor_logit = cfg.censoring.baseline_logit(w, u_cluster)
        else:
            censor_logit = cfg.censoring.logit(w, u_cluster, previous_a, previous_l)
        censored = _bernoulli(rng, censor_logit).astype(bool) | ~at_risk
        c[:, t - 1] = censored
        at_risk = ~censored

        infected = _bernoulli(rng, cfg.infection.logit(w, u, treated_visits)) * at_risk
        infections[:, t - 1] = infected
        if t == VISITS:
            break
        l[:, t - 1] = infected

        treated = _bernoulli(rng, cfg.treatment.logit(t, w, u_cluster, infected)) * at_risk
        if t > 1:
            treated = treated * (previous_a == 1)
        a[:, t - 1] = treated
        previous_a, previous_l = treated.astype(np.int8), infected.astype(np.int8)
        treated_visits = a[:, :t].sum(axis=1).astype(float)

    y = np.where(c[:, -1] == 0, infections.sum(axis=1), 0).astype(float)
    return Dataset(
        subject_ids=np.arange(1, n + 1),
        cluster_ids=cluster,
        w=np.column_stack([w, u]),
        c=c,
        l=l,
        a=a,
        y=y,
        w_names=COVARIATE_NAMES,
    )


def kang_transform(w: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """w* = exp(w / 2), u* = u / (1 + exp(w)) + 10 (w clipped to ±700 against overflow)."""
    w = np.clip(np.asarray(w, dtype=float), -700.0, 700.0)
    u = np.asarray(u, dtype=float)
    return np.exp(w / 2.0), u / (1.0 + np.exp(w)) + 10.0
