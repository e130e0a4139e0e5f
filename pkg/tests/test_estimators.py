# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19 17:48
# Last Updated: 2026-10-19 17:48
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Tests for G-computation, IPTW, TMLE and contrasts."""

import numpy as np
import pytest
from scipy.special import logit

from cluster_ltmle.data import Dataset, Regimen
from cluster_ltmle.estimators import (
    EstimatorSettings,
    clever_covariate,
    contrast,
    fit_propensity,
    fluctuate,
    gcomp_likelihood,
    gcomp_sequential,
    iptw,
    run_contrast,
    run_method,
    tmle,
)
from cluster_ltmle.estimators.propensity import PropensityFits
from cluster_ltmle.types import Conditioning, EstimatorMethod, IntervalKind
from cluster_ltmle.utils.exceptions import (
    ArgumentError,
    EnumerationLimitError,
    EstimationError,
    StratumEmptyError,
)

TREAT = Regimen(a_bar=(1,))
CONTROL = Regimen(a_bar=(0,))


def _plug_in(dataset: Dataset, a: int) -> float:
    """Nonparametric plug-in for K=2 with a binary W, computed by hand."""
    w, l1, y = dataset.w[:, 0], dataset.l[:, 0], dataset.y
    c1, c2, a1 = dataset.c[:, 0], dataset.c[:, 1], dataset.a[:, 0]
    psi = 0.0
    for w_value in (0.0, 1.0):
        p_w = np.mean(w == w_value)
        p_l = np.mean(l1[(c1 == 0) & (w == w_value)])
        means = [np.mean(y[(c2 == 0) & (a1 == a) & (l1 == l_value) & (w == w_value)]) for l_value in (0.0, 1.0)]
        psi += p_w * ((1 - p_l) * means[0] + p_l * means[1])
    return float(psi)


def _hand_dataset(a=((1,), (1,), (0,)), y=(2.0, 1.0, 10.0), l=((0.0,), (0.0,), (0.0,))):
    n = len(y)
    return Dataset(
        subject_ids=np.arange(1, n + 1),
        cluster_ids=[1, 1, 2][:n],
        w=np.zeros((n, 0)),
        c=np.zeros((n, 2), dtype=int),
        l=np.array(l, dtype=float),
        a=np.array(a),
        y=np.array(y),
    )


class TestSaturatedEquivalence:
    """With cell-mean learners every plug-in estimator equals the hand computation."""

    @pytest.mark.parametrize("regimen", [TREAT, CONTROL], ids=["treat", "control"])
    def test_all_estimators_agree(self, discrete_dataset, strata, regimen):
        expected = _plug_in(discrete_dataset, regimen.a_bar[0])
        likelihood = gcomp_likelihood(discrete_dataset, regimen, strata)
        sequential = gcomp_sequential(discrete_dataset, regimen, strata)
        prop = fit_propensity(discrete_dataset, regimen, strata)
        targeted, fits = tmle(discrete_dataset, regimen, strata, prop)
        assert likelihood.psi_hat == pytest.approx(expected, abs=1e-10)
        assert sequential.psi_hat == pytest.approx(expected, abs=1e-10)
        assert targeted.psi_hat == pytest.approx(expected, abs=1e-10)
        assert np.abs(fits.epsilons).max() < 1e-6


class TestGComputation:
    """Test both G-computation variants."""

    def test_constant_outcome(self, discrete_dataset, strata):
        """Y = 2 for every completer: every estimator returns exactly 2."""
        d = discrete_dataset
        constant = Dataset(
            subject_ids=d.subject_ids, cluster_ids=d.cluster_ids, w=d.w, c=d.c, l=d.l, a=d.a,
            y=np.where(d.c[:, 1] == 0, 2.0, 0.0),
        )
        prop = fit_propensity(constant, TREAT, strata)
        targeted, fits = tmle(constant, TREAT, strata, prop)
        for report in (
            gcomp_sequential(constant, TREAT, strata),
            gcomp_likelihood(constant, TREAT, strata),
            targeted,
        ):
            assert report.psi_hat == pytest.approx(2.0, rel=1e-12)
            assert report.diagnostics["constant_outcome"] is True
        assert not fits.epsilons.any()
        assert (fits.qbar_star == 2.0).all()
        assert iptw(constant, TREAT, prop).psi_hat == pytest.approx(2.0, rel=1e-12)

    def test_enumeration_limit(self, strata):
        n, k = 4, 22
        dataset = Dataset(
            subject_ids=np.arange(n), cluster_ids=np.arange(n), w=np.zeros((n, 0)),
            c=np.zeros((n, k), dtype=int), l=np.zeros((n, k - 1)), a=np.ones((n, k - 1), dtype=int),
            y=[1.0, 0.0, 1.0, 0.0],
        )
        with pytest.raises(EnumerationLimitError):
            gcomp_likelihood(dataset, Regimen(a_bar=(1,) * (k - 1)), strata)

    def test_increment_on_simulated_counts(self, simulated_dataset, logistic, always_treat):
        """Y = L_1 + L_2 + L_3, so modelling Y - Σ L_t keeps ψ̂ inside [0, 3]."""
        report = gcomp_likelihood(simulated_dataset, always_treat, logistic, increment=True)
        assert 0.0 < report.psi_hat < 3.0
        assert report.diagnostics["increment"] is True

    def test_negative_increment(self, strata):
        dataset = _hand_dataset(l=((1.0,), (0.0,), (0.0,)), y=(0.0, 1.0, 1.0))
        with pytest.raises(EstimationError):
            gcomp_likelihood(dataset, TREAT, strata, increment=True)

    def test_pooled_conditioning(self, simulated_dataset, logistic, always_treat):
        report = gcomp_sequential(simulated_dataset, always_treat, logistic, Conditioning.POOLED)
        assert np.isfinite(report.psi_hat)
        assert report.diagnostics["conditioning"] == "pooled"

    def test_nobody_treated(self, strata):
        dataset = _hand_dataset(a=((0,), (0,), (0,)))
        with pytest.raises(StratumEmptyError) as info:
            gcomp_sequential(dataset, TREAT, strata)
        assert info.value.visit == 2

    def test_requires_imputed_data(self, strata):
        dataset = Dataset(
            subject_ids=[1, 2], cluster_ids=[1, 2], w=np.zeros((2, 0)), c=[[0, 1], [0, 0]],
            l=[[1.0], [0.0]], a=[[1], [1]], y=[np.nan, 1.0],
        )
        with pytest.raises(ArgumentError):
            gcomp_sequential(dataset, TREAT, strata)


class TestIptw:
    """Test the stabilized weighting estimator."""

    def test_hand_example(self):
        """Weights 2 and 1 on outcomes 2 and 1 give 5/3; the non-follower is ignored."""
        dataset = _hand_dataset()
        prop = PropensityFits(gbar=np.array([[1.0, 0.5], [1.0, 1.0], [1.0, 0.2]]))
        report = iptw(dataset, TREAT, prop)
        assert report.psi_hat == pytest.approx(5.0 / 3.0)
        d = report.influence_curve.d_total
        assert d[2] == 0.0
        assert d.sum() == pytest.approx(0.0, abs=1e-12)
        assert report.interval == IntervalKind.WALD

    def test_equal_propensities_give_follower_mean(self):
        dataset = _hand_dataset()
        prop = PropensityFits(gbar=np.full((3, 2), 0.4))
        assert iptw(dataset, TREAT, prop).psi_hat == pytest.approx(1.5)

    def test_no_followers(self):
        dataset = _hand_dataset(a=((0,), (0,), (0,)))
        with pytest.raises(EstimationError):
            iptw(dataset, TREAT, PropensityFits(gbar=np.full((3, 2), 0.5)))

    def test_shape_checked(self):
        with pytest.raises(ArgumentError):
            iptw(_hand_dataset(), TREAT, PropensityFits(gbar=np.full((2, 2), 0.5)))


class TestTargeting:
    """Test the TMLE building blocks."""

    def test_clever_covariate(self):
        dataset = _hand_dataset()
        prop = PropensityFits(gbar=np.full((3, 2), 0.25))
        assert clever_covariate(prop, dataset, TREAT, 2).tolist() == [4.0, 4.0, 0.0]

    def test_fluctuation_identity(self):
        """When Q̄ already equals the target, ε = 0 and nothing moves."""
        q = np.array([0.2, 0.6, 0.9])
        updated, epsilon = fluctuate(q, q, np.array([1.0, 2.0, 0.5]))
        assert epsilon == pytest.approx(0.0, abs=1e-10)
        assert updated == pytest.approx(q)

    def test_fluctuation_closed_form(self):
        """One distinct (q, g) pair: expit(logit q + 2ε) must hit the target mean."""
        q = np.array([0.5, 0.5, 0.3])
        target = np.array([0.75, 0.75, 0.0])
        updated, epsilon = fluctuate(q, target, np.array([2.0, 2.0, 0.0]))
        assert epsilon == pytest.approx(logit(0.75) / 2.0, abs=1e-9)
        assert updated[:2] == pytest.approx([0.75, 0.75], abs=1e-9)
        assert updated[2] == 0.3

    def test_fluctuation_length_mismatch(self):
        with pytest.raises(ArgumentError):
            fluctuate(np.ones(2) * 0.5, np.ones(3) * 0.5, np.ones(2))

    def test_influence_curve_mean_zero(self, simulated_dataset, logistic, always_treat):
        prop = fit_propensity(simulated_dataset, always_treat, logistic)
        report, fits = tmle(simulated_dataset, always_treat, logistic, prop)
        assert fits.targeted
        assert abs(report.influence_curve.d_total.mean()) < 1e-8
        assert report.se > 0
        assert report.ci[0] < report.psi_hat < report.ci[1]

    def test_propensity_from_other_data(self, simulated_dataset, discrete_dataset, logistic):
        prop = fit_propensity(discrete_dataset, TREAT, logistic)
        with pytest.raises(ArgumentError):
            tmle(simulated_dataset, Regimen(a_bar=(1, 1)), logistic, prop)


class TestContrast:
    """Test δ̂ and its uncertainty."""

    def test_self_contrast_is_zero(self, simulated_dataset, logistic, always_treat):
        prop = fit_propensity(simulated_dataset, always_treat, logistic)
        report, _ = tmle(simulated_dataset, always_treat, logistic, prop)
        delta = contrast(report, report)
        assert delta.psi_hat == 0.0
        assert delta.se == 0.0
        assert delta.target == "(1,1) vs (1,1)"

    def test_different_datasets(self, simulated_dataset, discrete_dataset, strata):
        first = gcomp_sequential(simulated_dataset, Regimen(a_bar=(1, 1)), strata)
        second = gcomp_sequential(discrete_dataset, TREAT, strata)
        with pytest.raises(ArgumentError):
            contrast(first, second)

    def test_different_methods(self, discrete_dataset, strata):
        first = gcomp_sequential(discrete_dataset, TREAT, strata)
        second = gcomp_likelihood(discrete_dataset, CONTROL, strata)
        with pytest.raises(ArgumentError):
            contrast(first, second)

    def test_point_only_contrast(self, discrete_dataset, strata):
        first = gcomp_sequential(discrete_dataset, TREAT, strata)
        second = gcomp_sequential(discrete_dataset, CONTROL, strata)
        delta = contrast(first, second)
        assert delta.psi_hat == pytest.approx(first.psi_hat - second.psi_hat)
        assert delta.interval == IntervalKind.NONE


class TestRunner:
    """Test dispatch by method name."""

    @pytest.mark.parametrize("method", list(EstimatorMethod))
    def test_every_method(self, simulated_dataset, always_treat, never_treat, method):
        settings = EstimatorSettings(bootstrap=5, sl_library=["logistic", "mean"], seed=3)
        first, second, delta = run_contrast(method, simulated_dataset, always_treat, never_treat, settings)
        expected = IntervalKind.PERCENTILE if method.uses_bootstrap else IntervalKind.WALD
        assert first.interval == expected
        assert delta.interval == expected
        assert delta.psi_hat == pytest.approx(first.psi_hat - second.psi_hat)
        assert np.isfinite(delta.se)
        assert delta.to_row()["method"] == method.value

    def test_bootstrap_disabled(self, simulated_dataset, always_treat):
        report = run_method(EstimatorMethod.GCOMP_SEQ, simulated_dataset, always_treat, EstimatorSettings(bootstrap=0))
        assert report.interval == IntervalKind.NONE
        assert np.isnan(report.se)

    def test_deterministic(self, simulated_dataset, always_treat):
        settings = EstimatorSettings(bootstrap=4, seed=9)
        first = run_method(EstimatorMethod.GCOMP, simulated_dataset, always_treat, settings)
        second = run_method(EstimatorMethod.GCOMP, simulated_dataset, always_treat, settings)
        assert first.psi_hat == second.psi_hat
        assert first.bootstrap.replicates.tolist() == second.bootstrap.replicates.tolist()

    def test_settings_parse_learner_strings(self):
        settings = EstimatorSettings(q_learner="knn(k=7)")
        assert settings.q_learner.k == 7
