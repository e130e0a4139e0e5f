# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19 18:41
# Last Updated: 2026-10-19 18:41
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Tests for run configuration, output staging and the command line."""

import json

import json5
import pandas as pd
import pytest

from cluster_ltmle.cli import commands, main, resolve_config
from cluster_ltmle.cli.config import ENV_DEFAULTS, environment_layer, get_env_setting, is_env_overridden
from cluster_ltmle.cli.export_manager import cleanup_stale_staging, staged_output, to_jsonable
from cluster_ltmle.cli.main import parse_contrast
from cluster_ltmle.cli.tables import format_interval, format_number, render_estimates
from cluster_ltmle.data import save_dataset
from cluster_ltmle.types import EstimatorMethod, LearnerKind
from cluster_ltmle.utils.exceptions import ConfigError


@pytest.fixture
def clean_env(monkeypatch):
    for key in ENV_DEFAULTS:
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


@pytest.fixture
def data_file(temp_dir, simulated_dataset):
    path = temp_dir / "trial.csv"
    save_dataset(simulated_dataset, path, schema={"w": "w.1", "u": "w.2"})
    return path


def _staging_dirs(directory):
    return [p for p in directory.iterdir() if p.name.startswith(".staging-")]


class TestRunConfig:
    """Test layer precedence: defaults < environment < file < flags."""

    def test_defaults(self, clean_env):
        cfg = resolve_config()
        assert cfg.inference.bootstrap == 200
        assert cfg.estimation.methods == [EstimatorMethod.TMLE]
        assert cfg.estimation.truncation == 0.005
        assert not is_env_overridden("CLUSTER_LTMLE_BOOTSTRAP")
        assert get_env_setting("CLUSTER_LTMLE_BOOTSTRAP") == "200"

    def test_environment_layer(self, clean_env):
        clean_env.setenv("CLUSTER_LTMLE_BOOTSTRAP", "50")
        clean_env.setenv("CLUSTER_LTMLE_WORKERS", "2")
        assert environment_layer() == {"inference": {"bootstrap": "50"}, "workers": "2"}
        cfg = resolve_config()
        assert cfg.inference.bootstrap == 50
        assert cfg.workers == 2

    def test_file_beats_environment_and_flags_beat_file(self, clean_env, temp_dir):
        clean_env.setenv("CLUSTER_LTMLE_BOOTSTRAP", "50")
        path = temp_dir / "run.json5"
        path.write_text("{\n  // hand-written\n  inference: { bootstrap: 20 },\n  seed: 4,\n}\n")
        assert resolve_config(path).inference.bootstrap == 20
        cfg = resolve_config(path, {"inference": {"bootstrap": 10}})
        assert cfg.inference.bootstrap == 10
        assert cfg.seed == 4

    def test_unknown_key(self, clean_env):
        with pytest.raises(ConfigError) as info:
            resolve_config(overrides={"estimation": {"learner": "logistic"}})
        assert info.value.details["problems"][0]["location"] == "estimation.learner"

    def test_invalid_regimen(self, clean_env):
        with pytest.raises(ConfigError):
            resolve_config(overrides={"estimation": {"regimens": ["1,0,1"]}})

    def test_estimator_settings(self, clean_env):
        cfg = resolve_config(overrides={"estimation": {"q_learner": "knn(k=9)", "sl_folds": 4}, "seed": 7})
        settings = cfg.estimator_settings()
        assert settings.q_learner.kind == LearnerKind.KNN
        assert settings.sl_library.kind == LearnerKind.ENSEMBLE
        assert settings.sl_library.folds == 4
        assert settings.seed == 7

    def test_parse_contrast(self):
        assert parse_contrast("1,1:0,0") == ["1,1", "0,0"]
        with pytest.raises(ConfigError):
            parse_contrast("1,1")


class TestStagedOutput:
    """Test that only completed runs reach the output directory."""

    def test_commit(self, temp_dir):
        with staged_output(temp_dir) as staging:
            (staging / "a.txt").write_text("a")
        assert (temp_dir / "a.txt").read_text() == "a"
        assert _staging_dirs(temp_dir) == []

    def test_exception_discards_files(self, temp_dir):
        with pytest.raises(RuntimeError):
            with staged_output(temp_dir) as staging:
                (staging / "partial.csv").write_text("x")
                raise RuntimeError("interrupted")
        assert not (temp_dir / "partial.csv").exists()
        assert _staging_dirs(temp_dir) == []

    def test_cleanup_stale_staging(self, temp_dir):
        (temp_dir / ".staging-old").mkdir()
        assert cleanup_stale_staging(temp_dir) == 1
        assert _staging_dirs(temp_dir) == []

    def test_to_jsonable(self):
        assert to_jsonable({1: float("nan"), "m": EstimatorMethod.IPTW}) == {"1": None, "m": "iptw"}


class TestTables:
    def test_format_number(self):
        assert format_number(-0.0833) == "-0.083"
        assert format_number(-0.0001) == "0.000"
        assert format_number(None) == "NA"
        assert format_number(float("nan")) == "NA"
        assert format_number(93.6, 0) == "94"

    def test_format_interval(self):
        assert format_interval(-0.0833, -0.0128) == "(-0.083, -0.013)"
        assert format_interval(float("nan"), 1.0) == "NA"

    def test_render_estimates(self):
        frame = pd.DataFrame(
            [{"label": "TMLE", "target": "(1,1) vs (0,0)", "estimate": -0.048, "se": 0.018, "ci_lo": -0.083, "ci_hi": -0.013}]
        )
        text = render_estimates(frame)
        assert "## (1,1) vs (0,0)" in text
        assert "| TMLE   |" in text
        assert "(-0.083, -0.013)" in text


class TestCommandLine:
    """End-to-end runs through main()."""

    def test_unknown_method(self, clean_env, temp_dir, data_file):
        code = main(["estimate", "--data", str(data_file), "--method", "forest", "--regimen", "1,1", "--out", str(temp_dir)])
        assert code == 2
        report = json.loads((temp_dir / "error.json").read_text())
        assert report["success"] is False
        assert report["exit_code"] == 2
        assert "tmle" in report["details"]["valid_methods"]

    def test_missing_data_file(self, clean_env, temp_dir):
        code = main(["estimate", "--data", str(temp_dir / "none.csv"), "--regimen", "1,1", "--out", str(temp_dir)])
        assert code == 1
        assert (temp_dir / "error.json").exists()

    def test_estimate(self, clean_env, temp_dir, data_file, capsys):
        args = [
            "estimate", "--data", str(data_file), "--method", "iptw", "--method", "gcomp-seq",
            "--contrast", "1,1:0,0", "--bootstrap", "3", "--dump-replicates",
        ]
        assert main(args + ["--out", str(temp_dir / "first")]) == 0
        assert main(args + ["--out", str(temp_dir / "second")]) == 0

        first = temp_dir / "first"
        for name in ("estimates.csv", "estimates.txt", "diagnostics.json", "bootstrap_replicates.csv", "VERSION"):
            assert (first / name).is_file()
        assert json.loads((first / "config.resolved.json").read_text())["inference"]["bootstrap"] == 3
        assert _staging_dirs(first) == []
        assert (first / "estimates.csv").read_bytes() == (temp_dir / "second" / "estimates.csv").read_bytes()

        frame = pd.read_csv(first / "estimates.csv")
        assert len(frame) == 6
        assert set(frame["target"]) == {"(1,1)", "(0,0)", "(1,1) vs (0,0)"}
        assert "# Estimates" in capsys.readouterr().out

        assert main(["report", str(first / "estimates.csv"), "--out", str(temp_dir / "report")]) == 0
        assert "(1,1) vs (0,0)" in (temp_dir / "report" / "report.txt").read_text()

    @pytest.mark.slow
    def test_parallel_bootstrap_is_byte_identical(self, clean_env, temp_dir, data_file):
        """Two runs with the same seed and two bootstrap workers write identical CSVs."""
        args = [
            "estimate", "--data", str(data_file), "--method", "gcomp", "--method", "gcomp-seq", "--method", "tmle",
            "--contrast", "1,1:0,0", "--bootstrap", "40", "--workers", "2", "--seed", "17", "--dump-replicates",
        ]
        assert main(args + ["--out", str(temp_dir / "first")]) == 0
        assert main(args + ["--out", str(temp_dir / "second")]) == 0
        for name in ("estimates.csv", "bootstrap_replicates.csv"):
            assert (temp_dir / "first" / name).read_bytes() == (temp_dir / "second" / name).read_bytes()

    def test_report_rejects_other_csv(self, clean_env, temp_dir):
        other = temp_dir / "other.csv"
        other.write_text("a,b\n1,2\n")
        assert main(["report", str(other), "--out", str(temp_dir)]) == 2

    def test_unknown_log_level(self, clean_env, temp_dir):
        other = temp_dir / "other.csv"
        other.write_text("a,b\n1,2\n")
        assert main(["report", str(other), "--log-level", "loud", "--out", str(temp_dir)]) == 2
        assert "valid_levels" in json.loads((temp_dir / "error.json").read_text())["details"]

    def test_calibration_out_of_bracket(self, clean_env, temp_dir):
        code = main(["calibrate", "--target", "0.5", "--n-mc", "20000", "--out", str(temp_dir)])
        assert code == 3
        report = json.loads((temp_dir / "error.json").read_text())
        assert report["error_type"] == "CalibrationError"
        assert len(report["details"]["trace"]) == 2

    def test_frozen_calibration_skips_search(self, clean_env, temp_dir, monkeypatch):
        assert main(["calibrate", "--target", "0", "--n-mc", "20000", "--out", str(temp_dir / "cal")]) == 0
        frozen = temp_dir / "cal" / "calibrated_dgp.json5"
        saved = json5.loads(frozen.read_text())
        assert saved["dgp"]["infection"]["treatment"] == 0.0
        assert saved["dgp"]["calibration"]["n_mc"] == 20000

        def no_search(*args, **kwargs):
            raise AssertionError("calibration search should not run")

        monkeypatch.setattr(commands, "calibrate", no_search)
        code = main(["calibrate", "--target", "0", "--dgp", str(frozen), "--out", str(temp_dir / "verify")])
        assert code == 0
        assert (temp_dir / "verify" / "config.resolved.json").is_file()

    def test_simulate_single_replicate(self, clean_env, temp_dir):
        config = temp_dir / "sim.json5"
        config.write_text("{ simulation: { oracle_draws: 20000 } }")
        code = main(
            [
                "simulate", "--config", str(config), "--scenario", "fully_adjusted", "--method", "iptw",
                "--reps", "1", "--clusters", "4", "--per-cluster", "50", "--bootstrap", "0",
                "--out", str(temp_dir / "sim"),
            ]
        )
        assert code == 0
        out = temp_dir / "sim"
        lines = (out / "scenario_fully_adjusted.csv").read_text().splitlines()
        header, row = lines[0].split(","), lines[1].split(",")
        assert row[header.index("se")] == "NA"
        assert row[header.index("coverage")] == "NA"
        assert "Adjusting for all confounders" in (out / "simulation.txt").read_text()
        assert set(json.loads((out / "dgp_checks.json").read_text())) == {
            "treatment_vs_infection",
            "censoring_vs_infection",
            "infection_vs_treatment",
        }
