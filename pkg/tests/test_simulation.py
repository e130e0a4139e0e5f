# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19 18:25
# Last Updated: 2026-10-19 18:25
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Tests for the simulation DGP, oracle, calibration and scenario runner."""

import numpy as np
import pandas as pd
import pytest

from cluster_ltmle.data import Regimen
from cluster_ltmle.estimators import EstimatorSettings
from cluster_ltmle.simulation import (
    ALWAYS_TREAT,
    NEVER_TREAT,
    DgpConfig,
    Scenario,
    calibrate,
    check_sign_constraints,
    draw_baseline,
    generate_dataset,
    kang_transform,
    oracle_contrast,
    run_scenario,
    summarize_method,
    true_value_oracle,
    verify_calibration,
)
from cluster_ltmle.types import EstimatorMethod, ScenarioName
from cluster_ltmle.utils.exceptions import ArgumentError, CalibrationError, SimulationError


class TestDgp:
    """Test data generation."""

    def test_default_size(self):
        cfg = DgpConfig()
        assert (cfg.clusters, cfg.per_cluster, cfg.n) == (31, 500, 15500)

    def test_generated_data_are_canonical(self, simulated_dataset):
        d = simulated_dataset
        assert d.is_canonical
        assert (d.n, d.k, d.m) == (360, 3, 6)
        assert d.w_names == ("w", "u")

    def test_monotone_treatment(self, simulated_dataset):
        assert np.all(simulated_dataset.a[:, 1] <= simulated_dataset.a[:, 0])

    def test_censored_outcome_is_zero(self, simulated_dataset):
        censored = simulated_dataset.c[:, -1] == 1
        assert censored.any()
        assert np.all(simulated_dataset.y[censored] == 0.0)

    def test_outcome_counts_infections(self, simulated_dataset):
        """Y ≥ L_1 + L_2 for completers and never exceeds three."""
        d = simulated_dataset
        done = d.c[:, -1] == 0
        assert np.all(d.y[done] >= d.l[done].sum(axis=1))
        assert d.y.max() <= 3.0

    def test_deterministic(self, small_dgp):
        first = generate_dataset(small_dgp, seed=4)
        second = generate_dataset(small_dgp, seed=4)
        assert first.fingerprint == second.fingerprint
        assert generate_dataset(small_dgp, seed=5).fingerprint != first.fingerprint

    def test_treatment_effect_override(self, small_dgp):
        changed = small_dgp.with_treatment_effect(-0.5)
        assert changed.infection.treatment == -0.5
        assert changed.calibration is None
        assert small_dgp.infection.treatment == -0.095

    def test_from_file(self, temp_dir):
        path = temp_dir / "dgp.json5"
        path.write_text("{ dgp: { clusters: 4, per_cluster: 10, infection: { treatment: -0.2 } } }")
        cfg = DgpConfig.from_file(path)
        assert cfg.n == 40
        assert cfg.infection.treatment == -0.2

    def test_baseline_cluster_mean(self, small_dgp):
        baseline = draw_baseline(small_dgp, np.random.default_rng(0))
        for label in np.unique(baseline.cluster):
            rows = baseline.cluster == label
            assert np.ptp(baseline.u_cluster[rows]) == 0.0
        assert np.std(baseline.u - baseline.u_cluster) > 0.5

    def test_treatment_ignores_within_cluster_confounder(self):
        """With no W or infection effect on treatment, A_1 follows U only through its cluster mean."""
        cfg = DgpConfig(
            clusters=40,
            per_cluster=500,
            treatment={"w": 0.0, "u_cluster": 2.0, "infection": 0.0},
        )
        d = generate_dataset(cfg, seed=8)
        u = d.w[:, 1]
        cluster_mean = pd.Series(u).groupby(d.cluster_codes).transform("mean").to_numpy()
        a1 = d.a[:, 0].astype(float)
        assert abs(np.corrcoef(a1, u - cluster_mean)[0, 1]) < 0.04
        assert np.corrcoef(a1, cluster_mean)[0, 1] > 0.2

    def test_kang_transform(self):
        w_star, u_star = kang_transform(np.array([0.0, 2.0]), np.array([1.0, 0.0]))
        assert w_star.tolist() == pytest.approx([1.0, np.e])
        assert u_star.tolist() == pytest.approx([10.5, 10.0])

    def test_kang_transform_extreme_values(self):
        w_star, u_star = kang_transform(np.array([-1e6]), np.array([3.0]))
        assert np.isfinite(w_star).all() and np.isfinite(u_star).all()


class TestOracle:
    """Test the Monte Carlo truth."""

    def test_null_effect_is_exactly_zero(self, small_dgp):
        result = oracle_contrast(small_dgp.with_treatment_effect(0.0), ALWAYS_TREAT, NEVER_TREAT, n_mc=50_000)
        assert result.value == 0.0
        assert result.mc_se == 0.0

    def test_protective_treatment(self, small_dgp):
        assert oracle_contrast(small_dgp, ALWAYS_TREAT, NEVER_TREAT, n_mc=50_000).value < 0

    def test_contrast_is_difference_of_values(self, small_dgp):
        treated = true_value_oracle(small_dgp, ALWAYS_TREAT, n_mc=120_000, seed=3)
        untreated = true_value_oracle(small_dgp, NEVER_TREAT, n_mc=120_000, seed=3)
        delta = oracle_contrast(small_dgp, ALWAYS_TREAT, NEVER_TREAT, n_mc=120_000, seed=3)
        assert delta.value == pytest.approx(treated.value - untreated.value, abs=1e-12)
        assert delta.n_mc == 120_000
        assert 0 < treated.value < 3

    def test_regimen_length(self, small_dgp):
        with pytest.raises(ArgumentError):
            true_value_oracle(small_dgp, Regimen(a_bar=(1,)), n_mc=100)

    def test_too_few_draws(self, small_dgp):
        with pytest.raises(ArgumentError):
            true_value_oracle(small_dgp, ALWAYS_TREAT, n_mc=1)

    @pytest.mark.slow
    def test_default_effect_size(self):
        """The default coefficients give δ close to -0.030."""
        delta = oracle_contrast(DgpConfig(), ALWAYS_TREAT, NEVER_TREAT)
        assert delta.value == pytest.approx(-0.030, abs=0.003)


class TestCalibration:
    """Test the coefficient search."""

    def test_null_target(self, small_dgp):
        cfg = calibrate(0.0, small_dgp, n_mc=20_000)
        assert cfg.infection.treatment == 0.0
        assert cfg.calibration.delta == 0.0

    def test_target_out_of_bracket(self, small_dgp):
        with pytest.raises(CalibrationError) as info:
            calibrate(0.5, small_dgp, n_mc=20_000)
        assert len(info.value.trace) == 2

    def test_calibrated_config_verifies(self, small_dgp):
        cfg = calibrate(-0.030, small_dgp, n_mc=200_000, seed=2)
        assert cfg.calibration.target == -0.030
        assert cfg.calibration.delta == pytest.approx(-0.030, abs=1e-6)
        assert verify_calibration(cfg)
        assert -3.0 < cfg.infection.treatment < 0.0

    def test_uncalibrated_config(self, small_dgp):
        assert not verify_calibration(small_dgp)


class TestScenarios:
    """Test covariate policies and the replicate loop."""

    @pytest.mark.parametrize(
        "name, names",
        [
            (ScenarioName.UNMEASURED, ("w",)),
            (ScenarioName.FULLY_ADJUSTED, ("w", "u")),
            (ScenarioName.TRANSFORMED, ("w_star", "u_star")),
        ],
    )
    def test_covariates(self, simulated_dataset, name, names):
        adjusted = Scenario(name=name).apply(simulated_dataset)
        assert adjusted.w_names == names

    def test_cluster_indicators(self, simulated_dataset):
        adjusted = Scenario(name=ScenarioName.CLUSTER_ADJUSTED).apply(simulated_dataset)
        assert adjusted.p == 1 + simulated_dataset.m - 1
        assert adjusted.w[:, 1:].sum(axis=1).max() == 1.0

    def test_single_replicate(self, small_dgp):
        """One replicate has no spread, so SE and coverage are undefined."""
        report = run_scenario(
            Scenario(name=ScenarioName.FULLY_ADJUSTED),
            [EstimatorMethod.IPTW, EstimatorMethod.TMLE],
            reps=1,
            cfg=small_dgp,
            seed=1,
            settings=EstimatorSettings(bootstrap=0),
            truth=-0.03,
        )
        assert report.reps == 1
        assert [s.method for s in report.summaries] == [EstimatorMethod.IPTW, EstimatorMethod.TMLE]
        for summary in report.summaries:
            assert summary.se is None
            assert summary.coverage is None
        frame = report.to_frame()
        assert frame["scenario"].tolist() == ["fully_adjusted"] * 2
        assert len(report.replicates) == 2

    def test_no_replicates(self, small_dgp):
        with pytest.raises(SimulationError):
            run_scenario(Scenario(name=ScenarioName.UNMEASURED), [EstimatorMethod.IPTW], reps=0, cfg=small_dgp, seed=0)


class TestMetrics:
    """Test replicate summaries."""

    def test_summarize_method(self):
        replicates = pd.DataFrame(
            {
                "estimate": [-0.02, -0.04, np.nan],
                "se": [0.01, 0.01, np.nan],
                "ci_lo": [-0.05, -0.035, np.nan],
                "ci_hi": [0.0, -0.031, np.nan],
            }
        )
        summary = summarize_method(EstimatorMethod.TMLE, replicates, truth=-0.03)
        assert summary.estimate == pytest.approx(-0.03)
        assert summary.percent_bias == pytest.approx(0.0, abs=1e-9)
        assert summary.rmse == pytest.approx(0.01)
        assert summary.se == pytest.approx(0.01)
        assert summary.coverage == pytest.approx(50.0)
        assert (summary.replicates, summary.failures) == (2, 1)
        assert summary.to_row()["method"] == "tmle"

    def test_all_failed(self):
        replicates = pd.DataFrame({"estimate": [np.nan], "se": [np.nan], "ci_lo": [np.nan], "ci_hi": [np.nan]})
        summary = summarize_method(EstimatorMethod.IPTW, replicates, truth=-0.03)
        assert summary.replicates == 0
        assert summary.failures == 1
        assert summary.se is None

    @pytest.mark.filterwarnings("error::RuntimeWarning")
    def test_point_only_method_has_no_coverage(self):
        """A bootstrap-free G-computation run reports NA, not 0% coverage."""
        replicates = pd.DataFrame(
            {"estimate": [-0.02, -0.05], "se": [np.nan, np.nan], "ci_lo": [np.nan, np.nan], "ci_hi": [np.nan, np.nan]}
        )
        summary = summarize_method(EstimatorMethod.GCOMP, replicates, truth=-0.03)
        assert summary.coverage is None
        assert summary.se is None
        assert summary.replicates == 2

    def test_coverage_over_finite_intervals(self):
        replicates = pd.DataFrame(
            {"estimate": [-0.03, -0.03, -0.03], "se": [0.01, np.nan, 0.01], "ci_lo": [-0.05, np.nan, 0.0], "ci_hi": [0.0, np.nan, 0.1]}
        )
        assert summarize_method(EstimatorMethod.TMLE, replicates, truth=-0.03).coverage == pytest.approx(50.0)

    def test_sign_constraints(self):
        dataset = generate_dataset(DgpConfig(clusters=20, per_cluster=1000), seed=3)
        checks = check_sign_constraints(dataset)
        assert set(checks) == {"treatment_vs_infection", "censoring_vs_infection", "infection_vs_treatment"}
        for check in checks.values():
            assert check["p_first"] < check["p_second"]
