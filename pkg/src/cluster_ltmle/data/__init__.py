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

"""Longitudinal data model: records, ingestion, censoring imputation and scaling."""

from .loader import dataset_to_frame, load_dataset, save_dataset
from .records import (
    Dataset,
    LongitudinalRecord,
    Regimen,
    follows_regimen,
    impute_after_censoring,
)
from .scaling import OutcomeScaler, constant_outcome, make_scaler

__all__ = [
    "Dataset",
    "LongitudinalRecord",
    "OutcomeScaler",
    "Regimen",
    "constant_outcome",
    "dataset_to_frame",
    "follows_regimen",
    "impute_after_censoring",
    "load_dataset",
    "make_scaler",
    "save_dataset",
]
