"""Ridge regression on binary labels, closed form.

The intercept is unpenalized: on standardized (zero-mean) features it is
exactly the label mean, and the weights solve (Z'Z + lambda*I) w = Z'(y -
ybar).  Probabilities are the raw regression output clamped to [0, 1].
"""

from __future__ import annotations

import numpy as np

from .base import ScoringModel, Standardizer, require_both_labels


def fit_ridge_weights(Z: np.ndarray, y: np.ndarray, lam: float) -> tuple[np.ndarray, float]:
    """Closed-form solve on already-standardized features; exposed separately
    so equivalence against an independent dense solver is testable on
    arbitrary shapes."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    intercept = float(y.mean())
    centered = Z - Z.mean(axis=0)
    gram = centered.T @ centered + lam * np.eye(Z.shape[1])
    # positive definite for lambda > 0, so the solve cannot be singular
    weights = np.linalg.solve(gram, centered.T @ (y - intercept))
    return weights, intercept


def train_ridge(train, lam: float = 1.0) -> ScoringModel:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    require_both_labels(train.y)
    standardizer = Standardizer.fit(train.X)
    Z = standardizer.transform(train.X)
    weights, intercept = fit_ridge_weights(Z, train.y, lam)
    return ScoringModel(
        kind="ridge",
        standardizer=standardizer,
        params={"weights": weights.tolist(), "intercept": intercept},
        calibration=None,
        metadata={
            "hyperparameters": {"lambda": lam},
            "training": {"n_items": len(train), "n_simple": int(train.y.sum())},
        },
    )
