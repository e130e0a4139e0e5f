# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T10:44:27
# Last Updated: 2026-10-19T10:44:27
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Learner specifications as written in run configs, e.g. ``knn(k=30)``."""

import re
from typing import Any, Dict, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..types import LearnerKind
from ..utils.exceptions import ConfigError
from .base import FittedLearner, TrainingSet
from .basis import DEFAULT_DEGREE, fit_basis
from .logistic import DEFAULT_RIDGE, fit_logistic_irls
from .simple import DEFAULT_NEIGHBOURS, fit_knn, fit_mean, fit_strata

DEFAULT_FOLDS = 10

_SPEC_PATTERN = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$")


class LearnerSpec(BaseModel):
    """One learner, or a Super Learner over ``members``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: LearnerKind
    ridge: float = Field(DEFAULT_RIDGE, ge=0.0, description="Ridge penalty for logistic fits")
    k: int = Field(DEFAULT_NEIGHBOURS, ge=1, description="Neighbours for k-NN")
    degree: int = Field(DEFAULT_DEGREE, ge=1, le=5, description="Maximal monomial degree of the basis learner")
    members: Tuple["LearnerSpec", ...] = Field(default=(), description="Super Learner library")
    folds: int = Field(DEFAULT_FOLDS, ge=2, description="Cross-validation folds V")
    cluster_folds: bool = Field(True, description="Keep clusters within a single fold")

    @model_validator(mode="after")
    def validate_members(self) -> "LearnerSpec":
        if self.kind == LearnerKind.ENSEMBLE and not self.members:
            raise ValueError("An ensemble needs at least one library member")
        if self.kind != LearnerKind.ENSEMBLE and self.members:
            raise ValueError(f"Learner '{self.kind.value}' cannot have members")
        if any(m.kind == LearnerKind.ENSEMBLE for m in self.members):
            raise ValueError("Nested ensembles are not supported")
        return self

    def label(self) -> str:
        if self.kind == LearnerKind.ENSEMBLE:
            return "SL[" + ", ".join(m.label() for m in self.members) + "]"
        if self.kind == LearnerKind.KNN:
            return f"knn(k={self.k})"
        if self.kind == LearnerKind.BASIS:
            return f"basis(degree={self.degree})"
        if self.kind == LearnerKind.LOGISTIC and self.ridge != DEFAULT_RIDGE:
            return f"logistic(ridge={self.ridge:g})"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "LearnerSpec":
        """Parse ``name`` or ``name(key=value, ...)``.

        Raises:
            ConfigError: Unknown learner or parameter
        """
        match = _SPEC_PATTERN.match(text)
        if not match:
            raise ConfigError(f"Cannot parse learner spec '{text}'")
        name, arguments = match.group(1).lower(), match.group(2)
        try:
            kind = LearnerKind(name)
        except ValueError:
            valid = ", ".join(k.value for k in LearnerKind if k != LearnerKind.ENSEMBLE)
            raise ConfigError(f"Unknown learner '{name}'. Valid learners: {valid}") from None
        if kind == LearnerKind.ENSEMBLE:
            raise ConfigError("Write an ensemble as a list of learners, e.g. [logistic, knn]")
        params: Dict[str, Any] = {}
        if arguments and arguments.strip():
            for item in arguments.split(","):
                key, sep, value = item.partition("=")
                if not sep:
                    raise ConfigError(f"Learner parameter '{item.strip()}' must be key=value")
                params[key.strip()] = value.strip()
        try:
            return cls(kind=kind, **params)
        except ValidationError as error:
            raise ConfigError(f"Invalid parameters for learner '{text}': {error}") from error


LearnerSpec.model_rebuild()


def parse_learners(
    value: Union[str, Sequence[str], LearnerSpec],
    folds: int = DEFAULT_FOLDS,
    cluster_folds: bool = True,
) -> LearnerSpec:
    """A single spec, or a Super Learner when two or more are listed."""
    if isinstance(value, LearnerSpec):
        return value
    if isinstance(value, str):
        value = _split_top_level(value.strip().strip("[]"))
    specs = [LearnerSpec.parse(v) if isinstance(v, str) else v for v in value]
    if not specs:
        raise ConfigError("Empty learner list")
    if len(specs) == 1:
        return specs[0]
    return LearnerSpec(kind=LearnerKind.ENSEMBLE, members=tuple(specs), folds=folds, cluster_folds=cluster_folds)


def _split_top_level(text: str) -> list:
    """Split on commas outside parentheses: "logistic, knn(k=5)" → two items."""
    items, depth, current = [], 0, ""
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if char == "," and depth == 0:
            items.append(current.strip())
            current = ""
        else:
            current += char
    if current.strip():
        items.append(current.strip())
    return items


def fit_base_learner(spec: LearnerSpec, ts: TrainingSet) -> FittedLearner:
    """Fit a non-ensemble learner."""
    if spec.kind == LearnerKind.LOGISTIC:
        return fit_logistic_irls(ts, ridge=spec.ridge)
    if spec.kind == LearnerKind.MEAN:
        return fit_mean(ts)
    if spec.kind == LearnerKind.KNN:
        return fit_knn(ts, k=spec.k)
    if spec.kind == LearnerKind.STRATA:
        return fit_strata(ts)
    if spec.kind == LearnerKind.BASIS:
        return fit_basis(ts, degree=spec.degree, ridge=spec.ridge)
    raise ConfigError(f"'{spec.kind.value}' is not a single learner")
