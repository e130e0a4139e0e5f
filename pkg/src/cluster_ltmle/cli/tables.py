# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T15:38:26
# Last Updated: 2026-10-19T15:38:26
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Aligned text tables for estimate and scenario reports."""

import math
from typing import Any, List, Sequence

import pandas as pd

NA = "NA"
ESTIMATE_COLUMNS = ["Method", "Estimate", "S.E.", "95% C.I."]
SCENARIO_COLUMNS = ["Method", "δ̂", "%bias", "SE", "rMSE", "Coverage"]


def _missing(value: Any) -> bool:
    if value is None:
        return True
    try:
        return math.isnan(float(value))
    except (TypeError, ValueError):
        return False


def format_number(value: Any, decimals: int = 3) -> str:
    """Round to ``decimals``; "NA" for missing values."""
    if _missing(value):
        return NA
    text = f"{float(value):.{decimals}f}"
    # no "-0.000"
    if float(text) == 0.0:
        text = text.lstrip("-")
    return text


def format_interval(lo: Any, hi: Any) -> str:
    if _missing(lo) or _missing(hi):
        return NA
    return f"({format_number(lo)}, {format_number(hi)})"


def _add_table(lines: list, header: Sequence[str], rows: List[List[str]]):
    """Add a pipe table with columns padded to a common width."""
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines.append("| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |")
    lines.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")


def _add_heading(lines: list, heading: str, note: str = ""):
    lines.append(f"## {heading}")
    lines.append("")
    if note:
        lines.append(note)
        lines.append("")


def render_estimates(frame: pd.DataFrame, title: str = "Estimates") -> str:
    """Method, Estimate, S.E., 95% C.I., one block per target."""
    lines: List[str] = [f"# {title}", ""]
    for target, block in frame.groupby("target", sort=False):
        _add_heading(lines, str(target))
        rows = [
            [str(r["label"]), format_number(r["estimate"]), format_number(r["se"]), format_interval(r["ci_lo"], r["ci_hi"])]
            for _, r in block.iterrows()
        ]
        _add_table(lines, ESTIMATE_COLUMNS, rows)
    return "\n".join(lines)


def render_scenario(frame: pd.DataFrame, heading: str) -> str:
    """Method, δ̂, %bias, SE, rMSE, Coverage for one scenario."""
    lines: List[str] = []
    truth = frame["truth"].iloc[0] if "truth" in frame.columns and len(frame) else None
    _add_heading(lines, heading, f"True value = {format_number(truth)}" if not _missing(truth) else "")
    rows = [
        [
            str(r["label"]),
            format_number(r["estimate"]),
            format_number(r["percent_bias"], 0),
            format_number(r["se"]),
            format_number(r["rmse"]),
            format_number(r["coverage"], 0),
        ]
        for _, r in frame.iterrows()
    ]
    _add_table(lines, SCENARIO_COLUMNS, rows)
    return "\n".join(lines)


def is_scenario_frame(frame: pd.DataFrame) -> bool:
    return {"percent_bias", "rmse", "coverage"}.issubset(frame.columns)
