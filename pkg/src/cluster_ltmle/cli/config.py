# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T15:20:44
# Last Updated: 2026-10-19T15:20:44
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Run configuration: defaults < environment < config file < command-line flags."""

import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..data.records import Regimen
from ..estimators import SL_LIBRARY, EstimatorSettings
from ..types import Command, Conditioning, EstimatorMethod, ScenarioName
from ..utils.config_parser import load_config_file
from ..utils.exceptions import ConfigError

# Environment variable defaults
ENV_DEFAULTS = {
    "CLUSTER_LTMLE_LOG_LEVEL": "INFO",
    "CLUSTER_LTMLE_WORKERS": "1",
    "CLUSTER_LTMLE_OUTPUT_DIR": "results",
    "CLUSTER_LTMLE_TRUNCATION": "0.005",
    "CLUSTER_LTMLE_BOOTSTRAP": "200",
}

# Where each environment setting lands in the run config
ENV_TARGETS = {
    "CLUSTER_LTMLE_LOG_LEVEL": ("output", "log_level"),
    "CLUSTER_LTMLE_WORKERS": (None, "workers"),
    "CLUSTER_LTMLE_OUTPUT_DIR": ("output", "directory"),
    "CLUSTER_LTMLE_TRUNCATION": ("estimation", "truncation"),
    "CLUSTER_LTMLE_BOOTSTRAP": ("inference", "bootstrap"),
}


def get_env_setting(key: str) -> str:
    """Get environment setting with fallback to default."""
    return os.getenv(key, ENV_DEFAULTS.get(key, ""))


def is_env_overridden(key: str) -> bool:
    """True when the variable is set in the environment rather than defaulted."""
    return os.getenv(key) is not None


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DataSection(_Section):
    path: Optional[Path] = Field(None, description="CSV file with the analysis data")
    columns: Optional[Union[Path, Dict[str, str]]] = Field(None, description="Schema: canonical name → column")
    long: bool = Field(False, description="One row per subject-visit")
    drop_incomplete_baseline: bool = False


class EstimationSection(_Section):
    methods: List[EstimatorMethod] = Field(default_factory=lambda: [EstimatorMethod.TMLE])
    regimens: List[str] = Field(default_factory=list, description='Regimens such as "1,1"')
    contrasts: List[Tuple[str, str]] = Field(default_factory=list, description='Pairs such as ["1,1", "0,0"]')
    q_learner: Union[str, List[str]] = "logistic"
    g_learner: Union[str, List[str]] = "logistic"
    sl_library: List[str] = Field(default_factory=lambda: list(SL_LIBRARY))
    sl_folds: int = Field(10, ge=2)
    cluster_folds: bool = True
    conditioning: Conditioning = Conditioning.SUBSET
    truncation: float = Field(0.005, ge=0.0, lt=1.0)
    increment: bool = False

    @field_validator("regimens")
    @classmethod
    def validate_regimens(cls, value: List[str]) -> List[str]:
        for text in value:
            Regimen.parse(text)
        return value

    @field_validator("contrasts")
    @classmethod
    def validate_contrasts(cls, value: List[Tuple[str, str]]) -> List[Tuple[str, str]]:
        for first, second in value:
            Regimen.parse(first)
            Regimen.parse(second)
        return value


class InferenceSection(_Section):
    bootstrap: int = Field(200, ge=0, description="Cluster bootstrap replicates for G-computation")
    dump_replicates: bool = Field(False, description="Write bootstrap replicates to CSV")


class SimulationSection(_Section):
    dgp: Optional[Path] = Field(None, description="DGP config file (defaults to the built-in calibrated DGP)")
    scenarios: List[Union[ScenarioName, Literal["all"]]] = Field(default_factory=lambda: ["all"])
    methods: List[EstimatorMethod] = Field(default_factory=lambda: list(EstimatorMethod))
    reps: int = Field(200, ge=1)
    clusters: Optional[int] = Field(None, ge=2)
    per_cluster: Optional[int] = Field(None, ge=1)
    oracle_draws: int = Field(1_000_000, ge=2)
    increment: bool = Field(True, description="Outcome is the sum of the infection indicators")

    def scenario_names(self) -> List[ScenarioName]:
        if "all" in self.scenarios:
            return list(ScenarioName)
        return [ScenarioName(s) for s in self.scenarios]


class CalibrationSection(_Section):
    target: float = -0.030
    dgp: Optional[Path] = None
    n_mc: int = Field(1_000_000, ge=2)
    bracket: Tuple[float, float] = (-3.0, 0.0)
    tolerance: float = Field(0.002, gt=0.0)
    filename: str = "calibrated_dgp.json5"


class OutputSection(_Section):
    directory: Path = Path("results")
    log_level: str = "INFO"
    log_file: Optional[Path] = None


class RunConfig(BaseModel):
    """Fully resolved, validated configuration of one command."""

    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    command: Optional[Command] = None
    seed: int = Field(0, ge=0)
    workers: int = Field(1, description="joblib workers (-1 = all cores)")
    data: DataSection = Field(default_factory=DataSection)
    estimation: EstimationSection = Field(default_factory=EstimationSection)
    inference: InferenceSection = Field(default_factory=InferenceSection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    calibration: CalibrationSection = Field(default_factory=CalibrationSection)
    output: OutputSection = Field(default_factory=OutputSection)

    def estimator_settings(self, increment: Optional[bool] = None) -> EstimatorSettings:
        est = self.estimation
        return EstimatorSettings(
            q_learner=est.q_learner,
            g_learner=est.g_learner,
            sl_library=_library(est.sl_library, est.sl_folds, est.cluster_folds),
            conditioning=est.conditioning,
            truncation=est.truncation,
            bootstrap=self.inference.bootstrap,
            seed=self.seed,
            workers=self.workers,
            increment=est.increment if increment is None else increment,
        )


def _library(members: List[str], folds: int, cluster_folds: bool):
    from ..learners import parse_learners

    return parse_learners(members, folds=folds, cluster_folds=cluster_folds)


def _set_nested(target: Dict[str, Any], section: Optional[str], key: str, value: Any) -> None:
    if section is None:
        target[key] = value
    else:
        target.setdefault(section, {})[key] = value


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def environment_layer() -> Dict[str, Any]:
    """Settings present in the environment."""
    layer: Dict[str, Any] = {}
    for key, (section, field) in ENV_TARGETS.items():
        if is_env_overridden(key):
            _set_nested(layer, section, field, get_env_setting(key))
    return layer


def resolve_config(config_file: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Merge the layers and validate.

    Raises:
        ConfigError: Unknown keys, bad values or an unreadable config file
    """
    layers = environment_layer()
    if config_file is not None:
        layers = deep_merge(layers, load_config_file(config_file))
    if overrides:
        layers = deep_merge(layers, overrides)
    try:
        return RunConfig.model_validate(layers)
    except ValidationError as error:
        problems = [
            {"location": ".".join(str(part) for part in e["loc"]), "message": e["msg"]} for e in error.errors()
        ]
        summary = "; ".join(f"{p['location']}: {p['message']}" for p in problems)
        raise ConfigError(f"Invalid configuration: {summary}", details={"problems": problems}) from error
