# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T13:26:12
# Last Updated: 2026-10-19T13:26:12
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Difference of two regimen-specific estimates, δ = ψ_1 - ψ_2."""

from dataclasses import replace

from ..types import IntervalKind
from ..utils.exceptions import ArgumentError
from .report import EstimateReport


def contrast(first: EstimateReport, second: EstimateReport) -> EstimateReport:
    """δ̂ with uncertainty from the difference of influence curves, or of paired bootstrap replicates.

    Raises:
        ArgumentError: Reports come from different datasets or methods, or
            carry no paired uncertainty
    """
    if first.fingerprint != second.fingerprint:
        raise ArgumentError("Cannot contrast estimates computed on different datasets")
    if first.method != second.method:
        raise ArgumentError(f"Cannot contrast {first.method.value} with {second.method.value}")

    diagnostics = {"first": first.diagnostics, "second": second.diagnostics}
    delta = replace(
        first,
        target=f"{first.target} vs {second.target}",
        psi_hat=first.psi_hat - second.psi_hat,
        se=float("nan"),
        ci=(float("nan"), float("nan")),
        interval=IntervalKind.NONE,
        diagnostics=diagnostics,
        influence_curve=None,
        bootstrap=None,
    )
    if first.influence_curve is not None and second.influence_curve is not None:
        return delta.with_influence_curve(first.influence_curve - second.influence_curve)
    if first.bootstrap is not None and second.bootstrap is not None:
        return delta.with_bootstrap(first.bootstrap.paired_difference(second.bootstrap))
    if first.interval == IntervalKind.NONE and second.interval == IntervalKind.NONE:
        return delta
    raise ArgumentError("Both estimates need influence curves or paired bootstrap replicates")
