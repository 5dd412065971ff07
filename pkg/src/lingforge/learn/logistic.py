"""L2-regularized, class-weighted logistic regression.

The objective is the weighted mean log-loss plus ``l2/2 * ||beta||^2``; the
bias is not penalized. With balanced weights ``n / (2 * n_c)`` fitting is
equivalent to fitting unweighted on a dataset where the minority class has
been oversampled to parity.

Fitting runs gradient descent with Armijo backtracking from zero, so the
recorded loss history never increases.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import expit

from lingforge.errors import (
    ArityMismatch,
    ConfigError,
    InsufficientRows,
    ModelFormatError,
    NonFiniteLoss,
    SingleClass,
)
from lingforge.learn.standardize import StandardizerParams, fit_standardizer
from lingforge.models.enums import Label, ModelKind

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
CLASS_WEIGHTINGS = ("balanced", "none")

_ARMIJO_C = 1e-4
_MIN_STEP = 1e-20
_MAX_STEP = 1e6


@dataclass(frozen=True)
class LogisticConfig:
    """Logistic regression hyperparameters.

    Attributes:
        l2_strength: Ridge penalty on the coefficients (not the bias).
        max_iter: Maximum gradient steps.
        tol: Stop when the gradient norm drops to this value.
        class_weighting: ``balanced`` or ``none``.
        standardize: Fit a z-scoring standardizer on the training rows.
    """

    l2_strength: float = 1.0
    max_iter: int = 1000
    tol: float = 1e-6
    class_weighting: str = "balanced"
    standardize: bool = True

    def __post_init__(self) -> None:
        if self.l2_strength < 0:
            raise ConfigError(f"l2_strength must be >= 0, got {self.l2_strength}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be positive, got {self.max_iter}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.class_weighting not in CLASS_WEIGHTINGS:
            raise ConfigError(
                f"class_weighting must be one of {CLASS_WEIGHTINGS}, "
                f"got '{self.class_weighting}'"
            )


@dataclass(frozen=True)
class LogisticModel:
    """A fitted logistic regression.

    Coefficients live in standardized space; :meth:`predict_proba` applies the
    stored standardizer to raw feature rows first.
    """

    bias: float
    coefficients: tuple[float, ...]
    feature_names: tuple[str, ...]
    standardizer: StandardizerParams
    l2_strength: float
    class_weights: tuple[float, float]
    n_iter: int
    converged: bool
    loss_history: tuple[float, ...] = ()

    @property
    def model_kind(self) -> ModelKind:
        return ModelKind.LOGISTIC

    @property
    def n_features(self) -> int:
        return len(self.coefficients)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        data = np.atleast_2d(np.asarray(X, dtype=float))
        if data.shape[1] != self.n_features:
            raise ArityMismatch(f"Expected {self.n_features} features, got {data.shape[1]}")
        Z = self.standardizer.apply(data)
        return self.bias + Z @ np.asarray(self.coefficients)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """P(dementia) for each raw feature row."""
        return expit(self.decision_function(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Class codes; dementia when P(dementia) >= 0.5."""
        return (self.predict_proba(X) >= 0.5).astype(int)

    def predict_row(self, row: np.ndarray) -> tuple[float, Label]:
        proba = float(self.predict_proba(np.asarray(row, dtype=float)[None, :])[0])
        return proba, Label.DEMENTIA if proba >= 0.5 else Label.CONTROL

    def to_dict(self) -> dict[str, Any]:
        return {
            "model_kind": ModelKind.LOGISTIC.value,
            "format_version": FORMAT_VERSION,
            "feature_names": list(self.feature_names),
            "bias": self.bias,
            "coefficients": list(self.coefficients),
            "standardizer": self.standardizer.to_dict(),
            "l2_strength": self.l2_strength,
            "class_weights": list(self.class_weights),
            "n_iter": self.n_iter,
            "converged": self.converged,
            "loss_history": list(self.loss_history),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LogisticModel:
        if data.get("model_kind") != ModelKind.LOGISTIC.value:
            raise ModelFormatError(f"Not a logistic model: {data.get('model_kind')!r}")
        if data.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(
                f"Unsupported logistic model format: {data.get('format_version')!r}"
            )
        try:
            w0, w1 = data["class_weights"]
            return cls(
                bias=float(data["bias"]),
                coefficients=tuple(float(c) for c in data["coefficients"]),
                feature_names=tuple(data["feature_names"]),
                standardizer=StandardizerParams.from_dict(data["standardizer"]),
                l2_strength=float(data["l2_strength"]),
                class_weights=(float(w0), float(w1)),
                n_iter=int(data["n_iter"]),
                converged=bool(data["converged"]),
                loss_history=tuple(float(v) for v in data.get("loss_history", [])),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"Malformed logistic model: {e}") from e


# =============================================================================
# Objective
# =============================================================================


def balanced_class_weights(y: np.ndarray) -> tuple[float, float]:
    """Weights ``n / (2 * n_c)`` for classes 0 and 1."""
    y = np.asarray(y, dtype=int)
    n = y.size
    counts = np.bincount(y, minlength=2)
    if counts.min() == 0:
        raise SingleClass("Training labels contain a single class")
    return float(n / (2 * counts[0])), float(n / (2 * counts[1]))


def logistic_loss_and_grad(
    theta: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    weights: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray]:
    """Weighted mean log-loss with ridge penalty, and its gradient.

    Args:
        theta: ``[bias, beta_1, ..., beta_d]``.
        X: Standardized design matrix, shape ``(n, d)``.
        y: Class codes in {0, 1}.
        weights: Per-row weights.
        l2: Penalty strength.
    """
    bias, beta = theta[0], theta[1:]
    z = bias + X @ beta
    total = weights.sum()
    losses = np.logaddexp(0.0, z) - y * z
    loss = float(weights @ losses / total + 0.5 * l2 * (beta @ beta))
    residual = weights * (expit(z) - y) / total
    grad = np.empty_like(theta)
    grad[0] = residual.sum()
    grad[1:] = X.T @ residual + l2 * beta
    return loss, grad


# =============================================================================
# Fitting
# =============================================================================


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    config: LogisticConfig | None = None,
    feature_names: tuple[str, ...] | list[str] | None = None,
) -> LogisticModel:
    """Fit a logistic regression on raw feature rows.

    MISSING cells (NaN) are median-imputed by the standardizer fitted here,
    so callers must pass training rows only.

    Raises:
        InsufficientRows: With fewer than two rows.
        SingleClass: When ``y`` holds one class.
        NonFiniteLoss: If the objective becomes non-finite.
    """
    config = config or LogisticConfig()
    data = np.atleast_2d(np.asarray(X, dtype=float))
    labels = np.asarray(y, dtype=int)
    n, d = data.shape
    if n < 2:
        raise InsufficientRows(f"Logistic regression needs at least 2 rows, got {n}")
    if labels.shape != (n,):
        raise ArityMismatch(f"Expected {n} labels, got {labels.shape}")
    names = tuple(feature_names) if feature_names is not None else tuple(
        f"f{i}" for i in range(d)
    )
    if len(names) != d:
        raise ArityMismatch(f"Expected {d} feature names, got {len(names)}")

    class_weights = balanced_class_weights(labels)
    if config.class_weighting == "none":
        class_weights = (1.0, 1.0)
    weights = np.where(labels == 1, class_weights[1], class_weights[0])

    standardizer = fit_standardizer(data, scale=config.standardize)
    Z = standardizer.apply(data)

    theta, history, n_iter, converged = _gradient_descent(
        Z, labels.astype(float), weights, config
    )
    if not converged:
        logger.warning(
            "Logistic regression stopped after %d iterations without converging", n_iter
        )
    logger.debug("Logistic fit: %d iterations, final loss %.6g", n_iter, history[-1])
    return LogisticModel(
        bias=float(theta[0]),
        coefficients=tuple(float(b) for b in theta[1:]),
        feature_names=names,
        standardizer=standardizer,
        l2_strength=config.l2_strength,
        class_weights=class_weights,
        n_iter=n_iter,
        converged=converged,
        loss_history=tuple(history),
    )


def _gradient_descent(
    Z: np.ndarray, y: np.ndarray, weights: np.ndarray, config: LogisticConfig
) -> tuple[np.ndarray, list[float], int, bool]:
    theta = np.zeros(Z.shape[1] + 1)
    loss, grad = logistic_loss_and_grad(theta, Z, y, weights, config.l2_strength)
    if not np.isfinite(loss):
        raise NonFiniteLoss("Initial logistic loss is not finite")
    history = [loss]
    step = 1.0
    for iteration in range(config.max_iter):
        grad_sq = float(grad @ grad)
        if np.sqrt(grad_sq) <= config.tol:
            return theta, history, iteration, True
        step = min(step * 2.0, _MAX_STEP)
        while True:
            candidate = theta - step * grad
            cand_loss, cand_grad = logistic_loss_and_grad(
                candidate, Z, y, weights, config.l2_strength
            )
            if np.isfinite(cand_loss) and cand_loss <= loss - _ARMIJO_C * step * grad_sq:
                break
            step /= 2.0
            if step < _MIN_STEP:
                # No descent possible at machine precision.
                return theta, history, iteration, True
        theta, loss, grad = candidate, cand_loss, cand_grad
        history.append(loss)
    converged = bool(np.sqrt(float(grad @ grad)) <= config.tol)
    return theta, history, config.max_iter, converged


def predict_logistic(model: LogisticModel, row: np.ndarray) -> tuple[float, Label]:
    """P(dementia) and predicted label for one raw feature row."""
    return model.predict_row(row)
