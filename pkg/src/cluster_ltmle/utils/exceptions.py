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

"""Custom exceptions for cluster-ltmle."""

from typing import Any, Dict, List, Optional, Sequence


class LtmleError(Exception):
    """Base exception for all estimation, simulation and I/O errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ArgumentError(LtmleError, ValueError):
    """Exception raised when a public function receives an invalid argument."""


class ConfigError(LtmleError):
    """Exception raised for usage-level problems (bad config keys, unknown methods)."""


class DatasetSchemaError(LtmleError):
    """Exception raised when an input file does not match the column schema."""

    def __init__(
        self,
        message: str,
        missing_columns: Optional[Sequence[str]] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message, details)
        self.missing_columns = list(missing_columns or [])


class DatasetValidationError(LtmleError):
    """Exception raised when records violate the longitudinal data invariants."""

    def __init__(
        self,
        message: str,
        subject_ids: Optional[Sequence[Any]] = None,
        rows: Optional[Sequence[int]] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message, details)
        self.subject_ids: List[Any] = list(subject_ids or [])
        self.rows: List[int] = list(rows or [])


class DegenerateScaleError(LtmleError):
    """Exception raised when the outcome cannot be mapped onto [0, 1]."""


class LearnerFitError(LtmleError):
    """Exception raised when a learner (or every Super Learner member) fails to fit."""


class ConvergenceError(LearnerFitError):
    """Exception raised when IRLS does not reach the score tolerance."""

    def __init__(
        self,
        message: str,
        coefficients: Optional[Sequence[float]] = None,
        gradient_norm: Optional[float] = None,
        iterations: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message, details)
        self.coefficients = list(coefficients) if coefficients is not None else None
        self.gradient_norm = gradient_norm
        self.iterations = iterations


class StratumEmptyError(LtmleError):
    """Exception raised when no subject follows the regimen at a visit."""

    def __init__(self, message: str, visit: int, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, details)
        self.visit = visit


class EstimationError(LtmleError):
    """Exception raised when an estimator cannot produce an estimate."""


class EnumerationLimitError(EstimationError):
    """Exception raised when likelihood G-computation would enumerate too many histories."""


class TargetingStateError(LtmleError):
    """Exception raised when targeted fits are required but missing."""


class BootstrapError(LtmleError):
    """Exception raised when too many bootstrap replicates fail."""

    def __init__(
        self,
        message: str,
        failures: int = 0,
        replicates: int = 0,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message, details)
        self.failures = failures
        self.replicates = replicates


class SimulationError(LtmleError):
    """Exception raised when a simulation scenario has too many failed replicates."""


class CalibrationError(LtmleError):
    """Exception raised when the DGP calibration search fails."""

    def __init__(
        self,
        message: str,
        trace: Optional[Sequence[Dict[str, float]]] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message, details)
        self.trace = list(trace or [])
