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

"""Simulation DGP, Monte Carlo truth, calibration and scenario studies."""

from .calibration import ALWAYS_TREAT, NEVER_TREAT, calibrate, verify_calibration
from .dgp import Baseline, CalibrationRecord, DgpConfig, draw_baseline, generate_dataset, kang_transform
from .metrics import MethodSummary, check_sign_constraints, summarize_method
from .oracle import OracleResult, oracle_contrast, true_value_oracle
from .scenarios import Scenario, ScenarioReport, run_scenario

__all__ = [
    "ALWAYS_TREAT",
    "NEVER_TREAT",
    "Baseline",
    "CalibrationRecord",
    "DgpConfig",
    "MethodSummary",
    "OracleResult",
    "Scenario",
    "ScenarioReport",
    "calibrate",
    "check_sign_constraints",
    "draw_baseline",
    "generate_dataset",
    "kang_transform",
    "oracle_contrast",
    "run_scenario",
    "summarize_method",
    "true_value_oracle",
    "verify_calibration",
]
