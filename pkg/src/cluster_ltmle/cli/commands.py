# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T15:46:50
# Last Updated: 2026-10-19T15:46:50
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Sub-command implementations. Each returns a process exit status."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, Field

from ..data import Dataset, Regimen, impute_after_censoring, load_dataset
from ..estimators import EstimateReport, contrast, run_method
from ..simulation import (
    ALWAYS_TREAT,
    NEVER_TREAT,
    DgpConfig,
    Scenario,
    calibrate,
    check_sign_constraints,
    generate_dataset,
    oracle_contrast,
    run_scenario,
    verify_calibration,
)
from ..types import EstimatorMethod, ScenarioName
from ..utils.exceptions import CalibrationError, ConfigError
from ..utils.logging import get_logger, log_duration
from .config import RunConfig
from .export_manager import staged_output, write_csv, write_json, write_run_metadata
from .tables import is_scenario_frame, render_estimates, render_scenario

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_CALIBRATION = 3


class ErrorReport(BaseModel):
    """Machine-readable failure record written as error.json."""

    success: bool = Field(False, description="Always false")
    message: str = Field(..., description="Error message")
    error_type: str = Field(..., description="Exception class name")
    exit_code: int = Field(..., description="Process exit status")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")


def write_error_report(directory: Path, report: ErrorReport) -> Optional[Path]:
    """Best effort: an unwritable directory only loses the file."""
    try:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / "error.json"
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path
    except OSError as e:
        logger.warning(f"Could not write error report to {directory}: {e}")
        return None


# ---------------------------------------------------------------- estimate


def _load_analysis_dataset(cfg: RunConfig) -> Dataset:
    if cfg.data.path is None:
        raise ConfigError("estimate needs a data file (data.path or --data)")
    dataset = load_dataset(
        cfg.data.path,
        schema=cfg.data.columns,
        long=cfg.data.long,
        drop_incomplete_baseline=cfg.data.drop_incomplete_baseline,
    )
    return dataset if dataset.is_canonical else impute_after_censoring(dataset)


def _requested_targets(cfg: RunConfig) -> Tuple[List[Regimen], List[Tuple[Regimen, Regimen]]]:
    pairs = [(Regimen.parse(a), Regimen.parse(b)) for a, b in cfg.estimation.contrasts]
    regimens: List[Regimen] = []
    for regimen in [Regimen.parse(r) for r in cfg.estimation.regimens] + [r for pair in pairs for r in pair]:
        if regimen not in regimens:
            regimens.append(regimen)
    if not regimens:
        raise ConfigError("Nothing to estimate: give at least one regimen or contrast")
    return regimens, pairs


def _bootstrap_rows(report: EstimateReport) -> List[Dict[str, Any]]:
    if report.bootstrap is None:
        return []
    return [
        {"method": report.method.value, "target": report.target, "replicate": r, "estimate": value}
        for r, value in enumerate(report.bootstrap.replicates)
    ]


def cmd_estimate(cfg: RunConfig) -> int:
    """Estimate every (method, regimen) and each requested contrast on a real data set."""
    dataset = _load_analysis_dataset(cfg)
    regimens, pairs = _requested_targets(cfg)
    settings = cfg.estimator_settings()

    reports: List[EstimateReport] = []
    for method in cfg.estimation.methods:
        by_regimen = {}
        with log_duration(method.display_name):
            for regimen in regimens:
                logger.info(f"{method.display_name}: estimating {regimen.label()}")
                by_regimen[regimen] = run_method(method, dataset, regimen, settings)
        reports.extend(by_regimen[r] for r in regimens)
        reports.extend(contrast(by_regimen[first], by_regimen[second]) for first, second in pairs)

    frame = pd.DataFrame([report.to_row() for report in reports])
    diagnostics = {
        "dataset": {
            "n": dataset.n,
            "visits": dataset.k,
            "clusters": dataset.m,
            "covariates": list(dataset.w_names),
            "fingerprint": dataset.fingerprint,
        },
        "estimates": [
            {"method": r.method.value, "target": r.target, "diagnostics": r.diagnostics} for r in reports
        ],
    }

    with staged_output(cfg.output.directory) as staging:
        write_csv(staging / "estimates.csv", frame)
        (staging / "estimates.txt").write_text(render_estimates(frame) + "\n", encoding="utf-8")
        write_json(staging / "diagnostics.json", diagnostics)
        if cfg.inference.dump_replicates:
            rows = [row for report in reports for row in _bootstrap_rows(report)]
            if rows:
                write_csv(staging / "bootstrap_replicates.csv", pd.DataFrame(rows))
        write_run_metadata(staging, cfg.model_dump_json(indent=2))

    print(render_estimates(frame))
    return EXIT_OK


# ---------------------------------------------------------------- simulate


def _simulation_dgp(cfg: RunConfig) -> DgpConfig:
    sim = cfg.simulation
    dgp = DgpConfig.from_file(sim.dgp) if sim.dgp else DgpConfig()
    update = {key: value for key, value in (("clusters", sim.clusters), ("per_cluster", sim.per_cluster)) if value}
    return dgp.model_copy(update=update) if update else dgp


def cmd_simulate(cfg: RunConfig) -> int:
    """Run the scenario study and write one report per scenario."""
    sim = cfg.simulation
    dgp = _simulation_dgp(cfg)
    settings = cfg.estimator_settings(increment=sim.increment)
    if dgp.calibration is not None:
        truth = dgp.calibration.delta
    else:
        truth = oracle_contrast(dgp, ALWAYS_TREAT, NEVER_TREAT, sim.oracle_draws, cfg.seed, cfg.workers).value
    logger.info(f"Simulating n={dgp.n} ({dgp.clusters} clusters), true delta {truth:.4f}")

    sections = []
    with staged_output(cfg.output.directory) as staging:
        for name in sim.scenario_names():
            with log_duration(f"Scenario {name.value}"):
                report = run_scenario(
                    Scenario(name=name),
                    sim.methods,
                    sim.reps,
                    dgp,
                    cfg.seed,
                    settings=settings,
                    truth=truth,
                    workers=cfg.workers,
                )
            frame = report.to_frame()
            text = render_scenario(frame, name.heading)
            write_csv(staging / f"scenario_{name.value}.csv", frame)
            (staging / f"scenario_{name.value}.txt").write_text(text + "\n", encoding="utf-8")
            write_csv(staging / f"replicates_{name.value}.csv", report.replicates)
            sections.append(text)
        write_json(staging / "dgp_checks.json", check_sign_constraints(generate_dataset(dgp, cfg.seed)))
        (staging / "simulation.txt").write_text("\n".join(sections) + "\n", encoding="utf-8")
        write_run_metadata(staging, cfg.model_dump_json(indent=2))

    print("\n".join(sections))
    return EXIT_OK


# ---------------------------------------------------------------- calibrate


def render_calibrated_dgp(dgp: DgpConfig) -> str:
    """JSON5 text of a calibrated DGP with its oracle check as comments."""
    record = dgp.calibration
    lines = ["// Calibrated simulation DGP"]
    if record is not None:
        lines += [
            f"// target delta: {record.target:.6f}",
            f"// oracle delta: {record.delta:.6f} (MC se {record.mc_se:.2e}, {record.n_mc} draws, seed {record.seed})",
            f"// infection treatment coefficient: {dgp.infection.treatment:.8f}",
        ]
    body = json.dumps({"dgp": dgp.model_dump(mode="json")}, indent=2)
    return "\n".join(lines) + "\n" + body + "\n"


def cmd_calibrate(cfg: RunConfig) -> int:
    """Solve the treatment coefficient for the target δ, or verify a frozen config."""
    cal = cfg.calibration
    base = DgpConfig.from_file(cal.dgp) if cal.dgp else DgpConfig()

    if base.calibration is not None and abs(base.calibration.target - cal.target) < 1e-12:
        if not verify_calibration(base, cal.tolerance, cfg.workers):
            raise CalibrationError(
                f"Frozen config no longer reproduces delta {cal.target}",
                details={"recorded": base.calibration.model_dump()},
            )
        logger.info(f"Frozen config verified: delta {base.calibration.delta:.5f}, no search needed")
        with staged_output(cfg.output.directory) as staging:
            write_run_metadata(staging, cfg.model_dump_json(indent=2))
        return EXIT_OK

    calibrated = calibrate(
        cal.target,
        base,
        n_mc=cal.n_mc,
        seed=cfg.seed,
        bracket=cal.bracket,
        tolerance=cal.tolerance,
        workers=cfg.workers,
    )
    with staged_output(cfg.output.directory) as staging:
        (staging / cal.filename).write_text(render_calibrated_dgp(calibrated), encoding="utf-8")
        write_run_metadata(staging, cfg.model_dump_json(indent=2))
    print(render_calibrated_dgp(calibrated), end="")
    return EXIT_OK


# ---------------------------------------------------------------- report


def render_report_file(path: Path) -> str:
    """Re-render an estimates or scenario CSV without recomputation."""
    if not path.is_file():
        raise ConfigError(f"Report input not found: {path}", details={"path": str(path)})
    frame = pd.read_csv(path, float_precision="round_trip")
    if is_scenario_frame(frame):
        blocks = []
        for scenario, block in frame.groupby("scenario", sort=False):
            try:
                heading = ScenarioName(scenario).heading
            except ValueError:
                heading = str(scenario)
            blocks.append(render_scenario(block, heading))
        return "\n".join(blocks)
    if {"label", "target", "estimate", "se", "ci_lo", "ci_hi"}.issubset(frame.columns):
        return render_estimates(frame, title=path.stem)
    raise ConfigError(f"{path.name} is neither an estimates nor a scenario report")


def cmd_report(cfg: RunConfig, inputs: List[Path]) -> int:
    if not inputs:
        raise ConfigError("report needs at least one CSV file")
    text = "\n".join(render_report_file(Path(p)) for p in inputs)
    with staged_output(cfg.output.directory) as staging:
        (staging / "report.txt").write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def valid_method(name: str) -> EstimatorMethod:
    """Parse a method name; the error lists the valid ones."""
    try:
        return EstimatorMethod(name)
    except ValueError:
        raise ConfigError(
            f"Unknown method '{name}'. Valid methods: {', '.join(EstimatorMethod.valid_names())}",
            details={"valid_methods": EstimatorMethod.valid_names()},
        ) from None
