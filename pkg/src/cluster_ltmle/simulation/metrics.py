# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T14:49:30
# Last Updated: 2026-10-19T14:49:30
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Replicate summaries and empirical checks of the DGP's qualitative structure."""

from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np
import pandas as pd
from scipy.stats import norm

from ..data.records import Dataset
from ..types import EstimatorMethod


@dataclass(frozen=True)
class MethodSummary:
    """One row of a scenario table. None marks an undefined ("NA") entry."""

    method: EstimatorMethod
    estimate: float
    percent_bias: float
    se: Optional[float]
    rmse: float
    coverage: Optional[float]
    replicates: int
    failures: int

    def to_row(self) -> Dict[str, object]:
        row = asdict(self)
        row["method"] = self.method.value
        row["label"] = self.method.display_name
        return row


def summarize_method(method: EstimatorMethod, replicates: pd.DataFrame, truth: float) -> MethodSummary:
    """Mean δ̂, %bias, SE = sqrt(mean se²), rMSE and coverage of ``truth``.

    ``replicates`` holds columns estimate, se, ci_lo, ci_hi (NaN for failures).
    Coverage is taken over replicates with a finite interval and is None when
    there are none.
    """
    ok = replicates.dropna(subset=["estimate"])
    estimates = ok["estimate"].to_numpy(dtype=float)
    count = len(estimates)
    failures = len(replicates) - count
    if count == 0:
        return MethodSummary(method, float("nan"), float("nan"), None, float("nan"), None, 0, failures)

    mean = float(estimates.mean())
    percent_bias = 100.0 * (mean - truth) / abs(truth) if truth != 0 else float("nan")
    rmse = float(np.sqrt(np.mean((estimates - truth) ** 2)))
    se: Optional[float] = None
    coverage: Optional[float] = None
    if count >= 2:
        # point-only methods carry NaN se and interval; they stay NA rather than 0
        se_values = ok["se"].to_numpy(dtype=float)
        se_values = se_values[np.isfinite(se_values)]
        if se_values.size:
            se = float(np.sqrt(np.mean(se_values**2)))
        lo = ok["ci_lo"].to_numpy(dtype=float)
        hi = ok["ci_hi"].to_numpy(dtype=float)
        finite = np.isfinite(lo) & np.isfinite(hi)
        if finite.any():
            coverage = float(100.0 * np.mean((lo[finite] <= truth) & (truth <= hi[finite])))
    return MethodSummary(method, mean, percent_bias, se, rmse, coverage, count, failures)


def _one_sided_less(successes_a: float, total_a: float, successes_b: float, total_b: float) -> Dict[str, float]:
    """Two-proportion z test of p_a < p_b."""
    p_a = successes_a / total_a
    p_b = successes_b / total_b
    pooled = (successes_a + successes_b) / (total_a + total_b)
    se = np.sqrt(pooled * (1 - pooled) * (1 / total_a + 1 / total_b))
    z = (p_a - p_b) / se if se > 0 else 0.0
    return {"p_first": float(p_a), "p_second": float(p_b), "z": float(z), "p_value": float(norm.cdf(z))}


def check_sign_constraints(dataset: Dataset) -> Dict[str, Dict[str, float]]:
    """Empirical versions of the DGP's qualitative structure.

    * treatment_vs_infection: P(A_1 = 1 | L_1 = 1) < P(A_1 = 1 | L_1 = 0)
    * censoring_vs_infection: P(C_2 = 1 | L_1 = 1) > P(C_2 = 1 | L_1 = 0)
    * infection_vs_treatment: P(L_2 = 1 | A_1 = 1) < P(L_2 = 1 | A_1 = 0)

    Each entry reports both proportions and a one-sided z-test p-value.
    """
    at_1 = dataset.c[:, 0] == 0
    at_2 = dataset.c[:, 1] == 0
    l1 = dataset.l[:, 0] == 1
    a1 = dataset.a[:, 0] == 1
    c2 = dataset.c[:, 1] == 1
    l2 = dataset.l[:, 1] == 1

    checks = {
        "treatment_vs_infection": _one_sided_less(
            np.sum(a1 & l1 & at_1), np.sum(l1 & at_1), np.sum(a1 & ~l1 & at_1), np.sum(~l1 & at_1)
        ),
        "censoring_vs_infection": _one_sided_less(
            np.sum(c2 & ~l1 & at_1), np.sum(~l1 & at_1), np.sum(c2 & l1 & at_1), np.sum(l1 & at_1)
        ),
        "infection_vs_treatment": _one_sided_less(
            np.sum(l2 & a1 & at_2), np.sum(a1 & at_2), np.sum(l2 & ~a1 & at_2), np.sum(~a1 & at_2)
        ),
    }
    return checks
