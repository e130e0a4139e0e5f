# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19 17:03
# Last Updated: 2026-10-19 17:03
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Tests for the logistic, mean, k-NN and cell-mean learners."""

import numpy as np
import pytest
from loguru import logger
from scipy.special import expit, logit

from cluster_ltmle.learners import (
    LearnerSpec,
    LogisticFit,
    TrainingSet,
    build_expansion,
    fit_basis,
    fit_knn,
    fit_logistic_irls,
    fit_mean,
    fit_strata,
    logistic_gradient,
    logistic_loss,
    parse_learners,
)
from cluster_ltmle.simulation import kang_transform
from cluster_ltmle.types import LearnerKind
from cluster_ltmle.utils.exceptions import ArgumentError, ConfigError


class TestTrainingSet:
    def test_targets_outside_unit_interval(self):
        with pytest.raises(ArgumentError):
            TrainingSet(x=np.zeros((2, 1)), y=[0.5, 1.5])

    def test_row_mismatch(self):
        with pytest.raises(ArgumentError):
            TrainingSet(x=np.zeros((3, 1)), y=[0.5, 0.5])


class TestLogisticIrls:
    """Test the IRLS logistic regression."""

    def test_intercept_only_balanced(self):
        """Half ones and no features gives a zero intercept."""
        fit = fit_logistic_irls(TrainingSet(x=np.zeros((4, 0)), y=[1, 0, 1, 0]))
        assert fit.coefficients.tolist() == pytest.approx([0.0], abs=1e-10)
        assert fit.predict(np.zeros((2, 0))).tolist() == pytest.approx([0.5, 0.5])

    def test_two_by_two_table(self):
        """Unpenalized fit reproduces the cell log-odds: -ln 3 and ln 9."""
        x = np.array([0, 0, 0, 0, 1, 1, 1, 1], dtype=float).reshape(-1, 1)
        y = np.array([1, 0, 0, 0, 1, 1, 1, 0], dtype=float)
        fit = fit_logistic_irls(TrainingSet(x=x, y=y), ridge=0.0)
        assert fit.coefficients[0] == pytest.approx(-np.log(3.0), abs=1e-6)
        assert fit.coefficients[1] == pytest.approx(np.log(9.0), abs=1e-6)
        assert not fit.ridge_fallback

    def test_fractional_targets(self):
        """Quasi-binomial targets: the fitted mean matches the target mean."""
        y = np.array([0.2, 0.4, 0.9])
        fit = fit_logistic_irls(TrainingSet(x=np.zeros((3, 0)), y=y), ridge=0.0)
        assert fit.predict(np.zeros((1, 0)))[0] == pytest.approx(0.5, abs=1e-8)

    def test_offset_already_optimal(self):
        """With offset = logit(y) the fluctuation coefficient is 0."""
        y = np.array([0.2, 0.7, 0.5])
        x = np.array([[1.0], [2.0], [0.5]])
        fit = fit_logistic_irls(TrainingSet(x=x, y=y), offset=logit(y), ridge=0.0, fit_intercept=False)
        assert fit.coefficients.tolist() == pytest.approx([0.0], abs=1e-10)

    def test_offset_length_checked(self):
        with pytest.raises(ArgumentError):
            fit_logistic_irls(TrainingSet(x=np.zeros((3, 1)), y=[0, 1, 0]), offset=np.zeros(2))

    def test_separation_triggers_ridge_fallback(self):
        """Perfectly separated data are refit with a stronger ridge and flagged."""
        x = np.array([-0.2, -0.1, 0.1, 0.2]).reshape(-1, 1)
        fit = fit_logistic_irls(TrainingSet(x=x, y=[0, 0, 1, 1]))
        assert fit.ridge_fallback
        assert fit.ridge == pytest.approx(1e-2)
        assert np.all(np.isfinite(fit.coefficients))
        assert fit.summary()["ridge_fallback"] is True
        assert fit.converged

    def test_separation_with_strong_ridge_is_unconverged(self):
        """Already at the fallback ridge there is no refit: warn and flag instead."""
        x = np.array([-1.0, -0.5, 0.5, 1.0]).reshape(-1, 1)
        messages = []
        sink = logger.add(messages.append, level="WARNING", format="{message}")
        try:
            fit = fit_logistic_irls(TrainingSet(x=x, y=[0, 0, 1, 1]), ridge=1e-2, coefficient_cap=1.0)
        finally:
            logger.remove(sink)
        assert not fit.converged
        assert not fit.ridge_fallback
        assert fit.summary()["converged"] is False
        assert any("separated" in message for message in messages)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(40, 3))
        y = rng.random(40)
        weights = rng.random(40) + 0.5
        offset = rng.normal(size=40) * 0.3
        beta = rng.normal(size=4) * 0.5
        analytic = logistic_gradient(beta, x, y, weights, offset, ridge=0.1)
        h = 1e-6
        numeric = np.array(
            [
                (
                    logistic_loss(beta + h * e, x, y, weights, offset, ridge=0.1)
                    - logistic_loss(beta - h * e, x, y, weights, offset, ridge=0.1)
                )
                / (2 * h)
                for e in np.eye(4)
            ]
        )
        assert analytic == pytest.approx(numeric, rel=1e-5, abs=1e-6)

    def test_zero_coefficients_predict_half(self):
        fit = LogisticFit(coefficients=np.zeros(3))
        assert fit.n_features == 2
        assert fit.predict(np.ones((4, 2))).tolist() == pytest.approx([0.5] * 4)

    def test_feature_mismatch(self):
        fit = LogisticFit(coefficients=np.zeros(3))
        with pytest.raises(ArgumentError):
            fit.predict(np.ones((2, 3)))

    def test_predictions_bounded(self):
        fit = LogisticFit(coefficients=np.array([50.0]), fit_intercept=True)
        assert fit.predict(np.zeros((1, 0)))[0] == pytest.approx(1.0 - 1e-4)


class TestSimpleLearners:
    """Test the nonparametric learners."""

    def test_mean(self):
        ts = TrainingSet(x=np.zeros((10, 1)), y=[1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
        assert fit_mean(ts).predict(np.zeros((3, 1))).tolist() == pytest.approx([0.3] * 3)

    def test_knn_single_neighbour_interpolates(self):
        x = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0.2, 0.4, 0.6, 0.8])
        fit = fit_knn(TrainingSet(x=x, y=y), k=1)
        assert fit.predict(x).tolist() == pytest.approx(y.tolist())

    def test_knn_caps_k_at_n(self):
        fit = fit_knn(TrainingSet(x=np.arange(3.0).reshape(-1, 1), y=[0.1, 0.2, 0.3]), k=30)
        assert fit.k == 3
        assert fit.predict(np.array([[10.0]]))[0] == pytest.approx(0.2)

    def test_strata_cell_means(self):
        """Unseen cells fall back to the overall mean."""
        x = np.array([[0.0], [0.0], [1.0], [1.0]])
        fit = fit_strata(TrainingSet(x=x, y=[0.2, 0.4, 0.6, 0.8]))
        assert fit.predict(np.array([[0.0], [1.0], [2.0]])).tolist() == pytest.approx([0.3, 0.7, 0.5])

    def test_strata_without_features(self):
        fit = fit_strata(TrainingSet(x=np.zeros((2, 0)), y=[0.2, 0.6]))
        assert fit.predict(np.zeros((3, 0))).tolist() == pytest.approx([0.4] * 3)

    def test_offset_on_logit_scale(self):
        fit = fit_mean(TrainingSet(x=np.zeros((2, 1)), y=[0.5, 0.5]))
        assert fit.predict(np.zeros((1, 1)), offset=np.array([np.log(3.0)]))[0] == pytest.approx(0.75)


class TestBasisLearner:
    """Test the orthonormal polynomial and log basis."""

    def test_binary_columns_enter_linearly(self):
        rng = np.random.default_rng(0)
        x = np.column_stack([rng.integers(0, 2, 200), rng.normal(size=200)])
        expansion = build_expansion(x, degree=3)
        assert expansion.monomials.binary.tolist() == [0]
        assert expansion.monomials.logged.size == 0
        assert expansion.n_columns == 1 + 3

    def test_constant_column_is_dropped(self):
        rng = np.random.default_rng(1)
        x = np.column_stack([np.zeros(50), rng.normal(size=50)])
        assert build_expansion(x, degree=2).n_columns == 2

    def test_columns_are_orthonormal(self):
        rng = np.random.default_rng(2)
        w = rng.normal(0.0, 2.0, 1000)
        x = np.column_stack(kang_transform(w, rng.normal(size=1000)))
        expansion = build_expansion(x, degree=3)
        assert expansion.monomials.logged.tolist() == [0]
        basis = expansion.transform(x)
        assert basis.T @ basis / 1000 == pytest.approx(np.eye(basis.shape[1]), abs=1e-6)

    def test_spans_the_untransformed_covariates(self):
        """w = 2 log w* and u = (u* - 10)(1 + w*²) are exact linear combinations of the basis."""
        rng = np.random.default_rng(3)
        w = rng.normal(0.0, 2.0, 2000)
        u = rng.normal(size=2000)
        x = np.column_stack(kang_transform(w, u))
        design = np.column_stack([np.ones(2000), build_expansion(x, degree=3).transform(x)])
        for target in (w, u):
            coefficients = np.linalg.lstsq(design, target, rcond=None)[0]
            residual = target - design @ coefficients
            assert np.linalg.norm(residual) < 1e-6 * np.linalg.norm(target)

    def test_recovers_nonlinear_logistic(self):
        """On exp-transformed data the basis fit tracks the truth better than main terms."""
        rng = np.random.default_rng(4)
        w = rng.normal(0.0, 2.0, 5000)
        truth = expit(-0.5 + 1.2 * w)
        y = (rng.random(5000) < truth).astype(float)
        ts = TrainingSet(x=np.exp(w / 2.0).reshape(-1, 1), y=y)
        basis = fit_basis(ts, degree=3)
        linear = fit_logistic_irls(ts)
        basis_error = np.mean(np.abs(basis.predict(ts.x) - truth))
        linear_error = np.mean(np.abs(linear.predict(ts.x) - truth))
        assert basis_error < 0.03
        assert basis_error < linear_error
        assert basis.summary()["kind"] == "basis"

    def test_offset_and_feature_count(self):
        rng = np.random.default_rng(5)
        ts = TrainingSet(x=rng.normal(size=(100, 2)), y=rng.random(100))
        fit = fit_basis(ts, degree=2)
        base = fit.predict(ts.x[:3])
        shifted = fit.predict(ts.x[:3], offset=np.full(3, 0.5))
        assert (shifted > base).all()
        with pytest.raises(ArgumentError):
            fit.predict(np.zeros((1, 3)))

    def test_invalid_degree(self):
        with pytest.raises(ArgumentError):
            build_expansion(np.ones((3, 1)), degree=0)


class TestLearnerSpec:
    """Test learner specifications as written in configs."""

    def test_parse_with_parameter(self):
        spec = LearnerSpec.parse("knn(k=5)")
        assert spec.kind == LearnerKind.KNN
        assert spec.k == 5
        assert spec.label() == "knn(k=5)"

    def test_parse_basis(self):
        spec = LearnerSpec.parse("basis(degree=2)")
        assert spec.kind == LearnerKind.BASIS
        assert spec.label() == "basis(degree=2)"
        with pytest.raises(ConfigError):
            LearnerSpec.parse("basis(degree=9)")

    def test_unknown_learner(self):
        with pytest.raises(ConfigError, match="Unknown learner"):
            LearnerSpec.parse("forest")

    def test_positional_parameter_rejected(self):
        with pytest.raises(ConfigError):
            LearnerSpec.parse("knn(5)")

    def test_invalid_parameter_value(self):
        with pytest.raises(ConfigError):
            LearnerSpec.parse("knn(k=0)")

    def test_list_becomes_ensemble(self):
        spec = parse_learners("logistic, knn(k=5)")
        assert spec.kind == LearnerKind.ENSEMBLE
        assert spec.label() == "SL[logistic, knn(k=5)]"

    def test_single_item_list(self):
        assert parse_learners(["mean"]).kind == LearnerKind.MEAN
