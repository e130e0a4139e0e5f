# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T10:14:09
# Last Updated: 2026-10-19T10:14:09
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Main-terms logistic regression by iteratively reweighted least squares.

Targets may be fractional (quasi-binomial), which the nested Q̄ regressions
need, and a fixed offset may enter the linear predictor, which the TMLE
fluctuation needs.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import scipy.linalg
from scipy.special import expit

from ..types import LearnerKind
from ..utils.exceptions import ArgumentError, ConvergenceError
from ..utils.logging import get_logger
from .base import FittedLearner, TrainingSet

logger = get_logger(__name__)

DEFAULT_RIDGE = 1e-6
FALLBACK_RIDGE = 1e-2
MAX_ITERATIONS = 100
SCORE_TOLERANCE = 1e-8
COEFFICIENT_CAP = 30.0
MAX_HALVINGS = 40


@dataclass(eq=False)
class LogisticFit(FittedLearner):
    """Fitted coefficients (intercept first when ``fit_intercept``)."""

    coefficients: np.ndarray
    fit_intercept: bool = True
    iterations: int = 0
    gradient_norm: float = 0.0
    ridge: float = DEFAULT_RIDGE
    ridge_fallback: bool = False
    converged: bool = True
    kind: LearnerKind = field(default=LearnerKind.LOGISTIC, init=False)

    @property
    def n_features(self) -> int:  # type: ignore[override]
        return len(self.coefficients) - int(self.fit_intercept)

    def linear_predictor(self, x: np.ndarray, offset: Optional[np.ndarray] = None) -> np.ndarray:
        eta = _design(x, self.fit_intercept) @ self.coefficients
        return eta if offset is None else eta + offset

    def _predict(self, x: np.ndarray, offset: Optional[np.ndarray]) -> np.ndarray:
        return expit(self.linear_predictor(x, offset))

    def summary(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "coefficients": self.coefficients.tolist(),
            "iterations": self.iterations,
            "ridge_fallback": self.ridge_fallback,
            "converged": self.converged,
        }


def _design(x: np.ndarray, fit_intercept: bool) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if fit_intercept:
        return np.column_stack([np.ones(x.shape[0]), x])
    return x


def _penalty_mask(n_coef: int, fit_intercept: bool) -> np.ndarray:
    mask = np.ones(n_coef)
    if fit_intercept:
        mask[0] = 0.0
    return mask


def logistic_loss(
    beta: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    weights: Optional[np.ndarray] = None,
    offset: Optional[np.ndarray] = None,
    ridge: float = 0.0,
    fit_intercept: bool = True,
) -> float:
    """Negative penalized Bernoulli log-likelihood."""
    design = _design(x, fit_intercept)
    eta = design @ beta + (0.0 if offset is None else offset)
    w = np.ones(len(y)) if weights is None else weights
    loglik = np.sum(w * (y * eta - np.logaddexp(0.0, eta)))
    penalty = 0.5 * ridge * np.sum(_penalty_mask(len(beta), fit_intercept) * beta**2)
    return float(-loglik + penalty)


def logistic_gradient(
    beta: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    weights: Optional[np.ndarray] = None,
    offset: Optional[np.ndarray] = None,
    ridge: float = 0.0,
    fit_intercept: bool = True,
) -> np.ndarray:
    """Gradient of :func:`logistic_loss` with respect to ``beta``."""
    design = _design(x, fit_intercept)
    eta = design @ beta + (0.0 if offset is None else offset)
    w = np.ones(len(y)) if weights is None else weights
    score = design.T @ (w * (y - expit(eta)))
    return -score + ridge * _penalty_mask(len(beta), fit_intercept) * beta


def fit_logistic_irls(
    ts: TrainingSet,
    offset: Optional[np.ndarray] = None,
    ridge: float = DEFAULT_RIDGE,
    fit_intercept: bool = True,
    max_iter: int = MAX_ITERATIONS,
    tol: float = SCORE_TOLERANCE,
    coefficient_cap: float = COEFFICIENT_CAP,
) -> LogisticFit:
    """Fit a (weighted, ridge-penalized) logistic regression with fixed offset.

    Converged when max |gradient| / n < ``tol``. If any coefficient exceeds
    ``coefficient_cap`` (separation), the fit is redone with ridge at least
    1e-2 and the result is flagged. A fit that separates with ridge already
    at or above 1e-2 is returned as is with ``converged=False``.

    Raises:
        ArgumentError: Offset length mismatch or empty training set
        ConvergenceError: No convergence within ``max_iter`` Newton steps
    """
    if ts.n == 0:
        raise ArgumentError("Cannot fit a logistic regression on zero rows")
    if offset is not None:
        offset = np.asarray(offset, dtype=float).reshape(-1)
        if len(offset) != ts.n:
            raise ArgumentError(f"Offset has length {len(offset)}, expected {ts.n}")

    beta, iterations, grad_norm, separated = _newton(ts, offset, ridge, fit_intercept, max_iter, tol, coefficient_cap)
    if separated and ridge < FALLBACK_RIDGE:
        logger.warning(
            f"Logistic fit separated (|coefficient| > {coefficient_cap}); refitting with ridge={FALLBACK_RIDGE}"
        )
        beta, iterations, grad_norm, separated = _newton(
            ts, offset, FALLBACK_RIDGE, fit_intercept, max_iter, tol, np.inf
        )
        ridge = FALLBACK_RIDGE
        fallback = True
    else:
        fallback = False
        if separated:
            logger.warning(
                f"Logistic fit separated with ridge={ridge:g} (>= {FALLBACK_RIDGE}); "
                f"coefficients are not at an optimum"
            )

    if grad_norm >= tol and not separated:
        raise ConvergenceError(
            f"IRLS did not converge after {iterations} iterations (max |score|/n = {grad_norm:.3e})",
            coefficients=beta.tolist(),
            gradient_norm=grad_norm,
            iterations=iterations,
        )
    return LogisticFit(
        coefficients=beta,
        fit_intercept=fit_intercept,
        iterations=iterations,
        gradient_norm=grad_norm,
        ridge=ridge,
        ridge_fallback=fallback,
        converged=not separated,
    )


def _newton(
    ts: TrainingSet,
    offset: Optional[np.ndarray],
    ridge: float,
    fit_intercept: bool,
    max_iter: int,
    tol: float,
    cap: float,
):
    """Newton-Raphson with step halving; returns (beta, iterations, max|grad|/n, separated)."""
    design = _design(ts.x, fit_intercept)
    y = ts.y
    w = ts.sample_weights
    off = np.zeros(ts.n) if offset is None else offset
    mask = _penalty_mask(design.shape[1], fit_intercept)
    beta = np.zeros(design.shape[1])

    def objective(b: np.ndarray) -> float:
        eta = design @ b + off
        return float(np.sum(w * (y * eta - np.logaddexp(0.0, eta))) - 0.5 * ridge * np.sum(mask * b**2))

    current = objective(beta)
    for iteration in range(max_iter + 1):
        p = expit(design @ beta + off)
        gradient = design.T @ (w * (y - p)) - ridge * mask * beta
        grad_norm = float(np.max(np.abs(gradient)) / ts.n) if gradient.size else 0.0
        if grad_norm < tol:
            return beta, iteration, grad_norm, False
        if np.max(np.abs(beta), initial=0.0) > cap:
            return beta, iteration, grad_norm, True
        if iteration == max_iter:
            break

        hessian = design.T @ (design * (w * p * (1.0 - p))[:, None]) + ridge * np.diag(mask)
        try:
            step = scipy.linalg.solve(hessian, gradient, assume_a="sym")
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            step = np.linalg.lstsq(hessian, gradient, rcond=None)[0]

        scale = 1.0
        slack = 1e-12 * (1.0 + abs(current))
        for _ in range(MAX_HALVINGS):
            candidate = beta + scale * step
            value = objective(candidate)
            if value >= current - slack:
                break
            scale *= 0.5
        beta, current = candidate, value

    return beta, max_iter, grad_norm, np.max(np.abs(beta), initial=0.0) > cap
