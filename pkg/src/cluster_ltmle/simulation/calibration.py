# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T14:37:51
# Last Updated: 2026-10-19T14:37:51
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Search the infection-model treatment coefficient so the oracle δ hits a target."""

from typing import Dict, List, Tuple

from scipy.optimize import brentq

from ..data.records import Regimen
from ..utils.exceptions import CalibrationError
from ..utils.logging import get_logger
from .dgp import CalibrationRecord, DgpConfig
from .oracle import DEFAULT_DRAWS, oracle_contrast

logger = get_logger(__name__)

ALWAYS_TREAT = Regimen(a_bar=(1, 1))
NEVER_TREAT = Regimen(a_bar=(0, 0))
DEFAULT_BRACKET = (-3.0, 0.0)
DEFAULT_TOLERANCE = 0.002


def calibrate(
    target_delta: float,
    cfg0: DgpConfig,
    n_mc: int = DEFAULT_DRAWS,
    seed: int = 0,
    bracket: Tuple[float, float] = DEFAULT_BRACKET,
    tolerance: float = DEFAULT_TOLERANCE,
    workers: int = 1,
) -> DgpConfig:
    """Return ``cfg0`` with the treatment coefficient solved for δ = ``target_delta``.

    The oracle uses the same draws at every trial value, so the search is
    deterministic given ``seed``. The other coefficients, and so the sign
    constraints of the DGP, are left untouched.

    Raises:
        CalibrationError: The target lies outside the bracket, or the
            solution misses it by ``tolerance`` or more
    """
    trace: List[Dict[str, float]] = []

    def gap(coefficient: float) -> float:
        delta = oracle_contrast(cfg0.with_treatment_effect(coefficient), ALWAYS_TREAT, NEVER_TREAT, n_mc, seed, workers).value
        trace.append({"treatment": float(coefficient), "delta": delta})
        logger.debug(f"Calibration trial treatment={coefficient:.6f} delta={delta:.6f}")
        return delta - target_delta

    lo, hi = bracket
    gap_lo, gap_hi = gap(lo), gap(hi)
    if gap_lo * gap_hi > 0:
        raise CalibrationError(
            f"Target delta {target_delta} is not bracketed by treatment coefficients {bracket}",
            trace=trace,
        )
    if gap_lo == 0:
        coefficient = lo
    elif gap_hi == 0:
        coefficient = hi
    else:
        coefficient = brentq(gap, lo, hi, xtol=1e-8)

    calibrated = cfg0.with_treatment_effect(coefficient)
    check = oracle_contrast(calibrated, ALWAYS_TREAT, NEVER_TREAT, n_mc, seed, workers)
    if abs(check.value - target_delta) >= tolerance:
        raise CalibrationError(
            f"Calibrated delta {check.value:.5f} misses target {target_delta} by {tolerance} or more",
            trace=trace,
        )
    logger.info(
        f"Calibrated treatment coefficient {coefficient:.6f}: delta={check.value:.5f} "
        f"(MC se {check.mc_se:.2e}, {len(trace)} oracle evaluations)"
    )
    record = CalibrationRecord(target=target_delta, delta=check.value, mc_se=check.mc_se, n_mc=n_mc, seed=seed)
    return calibrated.model_copy(update={"calibration": record})


def verify_calibration(cfg: DgpConfig, tolerance: float = DEFAULT_TOLERANCE, workers: int = 1) -> bool:
    """Re-run the stored oracle check of a calibrated config without searching."""
    if cfg.calibration is None:
        return False
    record = cfg.calibration
    check = oracle_contrast(cfg, ALWAYS_TREAT, NEVER_TREAT, record.n_mc, record.seed, workers)
    return abs(check.value - record.target) < tolerance
