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

"""Regression learners and the Super Learner ensemble."""

from .base import PREDICTION_BOUND, FittedLearner, TrainingSet, bound
from .basis import BasisExpansion, BasisFit, build_expansion, fit_basis
from .library import LearnerSpec, parse_learners
from .logistic import LogisticFit, fit_logistic_irls, logistic_gradient, logistic_loss
from .simple import KnnFit, MeanFit, StrataFit, fit_knn, fit_mean, fit_strata
from .super_learner import (
    EnsembleFit,
    EnsembleWeights,
    cross_validated_loss,
    fit_learner,
    fit_super_learner,
    make_folds,
)


def predict(fitted: FittedLearner, x, offset=None):
    """Bounded predictions of any fitted learner."""
    return fitted.predict(x, offset)


__all__ = [
    "PREDICTION_BOUND",
    "BasisExpansion",
    "BasisFit",
    "EnsembleFit",
    "EnsembleWeights",
    "FittedLearner",
    "KnnFit",
    "LearnerSpec",
    "LogisticFit",
    "MeanFit",
    "StrataFit",
    "TrainingSet",
    "bound",
    "build_expansion",
    "cross_validated_loss",
    "fit_basis",
    "fit_knn",
    "fit_learner",
    "fit_logistic_irls",
    "fit_mean",
    "fit_strata",
    "fit_super_learner",
    "logistic_gradient",
    "logistic_loss",
    "make_folds",
    "parse_learners",
    "predict",
]
