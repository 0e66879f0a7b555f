"""Linear SVC trained by stochastic subgradient descent on the hinge loss,
with sigmoid calibration of the margins fitted afterwards.

The optimizer follows the projected-subgradient scheme with learning rate
1/(lambda*t) and lambda = 1/(C*n); the intercept is updated on violations
only, unregularized.
"""

from __future__ import annotations

import numpy as np

from .base import DivergenceError, ScoringModel, Standardizer, require_both_labels


def hinge_objective(Z: np.ndarray, y_pm: np.ndarray, weights: np.ndarray,
                    intercept: float, lam: float) -> float:
    margins = y_pm * (Z @ weights + intercept)
    return float(np.maximum(0.0, 1.0 - margins).mean()
                 + 0.5 * lam * weights @ weights)


def fit_svc_weights(Z: np.ndarray, y_pm: np.ndarray, c: float, epochs: int,
                    seed: int) -> tuple[np.ndarray, float]:
    """y_pm holds labels in {-1, +1}."""
    if c <= 0:
        raise ValueError("c must be positive")
    n, p = Z.shape
    lam = 1.0 / (c * n)
    rng = np.random.default_rng(seed)
    weights = np.zeros(p)
    intercept = 0.0
    t = 0
    for epoch in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            violated = y_pm[i] * (Z[i] @ weights + intercept) < 1.0
            weights *= 1.0 - eta * lam
            if violated:
                weights += eta * y_pm[i] * Z[i]
                intercept += eta * y_pm[i] * 0.01
        if not (np.isfinite(weights).all() and np.isfinite(intercept)):
            raise DivergenceError(f"non-finite parameters at epoch {epoch}")
    return weights, intercept


def _platt_nll(z: np.ndarray, target: np.ndarray) -> float:
    # cross-entropy of sigmoid(z) against soft targets, computed without
    # forming the probabilities (stable for large |z|)
    return float(np.sum((1.0 - target) * z + np.logaddexp(0.0, -z)))


def fit_platt(margins: np.ndarray, y: np.ndarray, iterations: int = 100) -> tuple[float, float]:
    """Fit p = sigmoid(a*margin + b) on smoothed targets (positives
    (n+ + 1)/(n+ + 2), negatives 1/(n- + 2)) by damped Newton with step
    halving, so separable margins cannot blow the scale up."""
    margins = np.asarray(margins, dtype=float)
    y = np.asarray(y)
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    target = np.where(y == 1, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))
    a = 0.0
    b = float(np.log((n_pos + 1.0) / (n_neg + 1.0)))
    nll = _platt_nll(a * margins + b, target)
    for _ in range(iterations):
        z = a * margins + b
        p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
        err = p - target
        g = np.array([err @ margins, err.sum()])
        if np.abs(g).max() < 1e-10:
            break
        w = np.maximum(p * (1.0 - p), 1e-12)
        hess = np.array([
            [(w * margins * margins).sum(), (w * margins).sum()],
            [(w * margins).sum(), w.sum()],
        ]) + 1e-10 * np.eye(2)
        direction = np.linalg.solve(hess, g)
        step = 1.0
        while step >= 1e-10:
            na, nb = a - step * direction[0], b - step * direction[1]
            new_nll = _platt_nll(na * margins + nb, target)
            if new_nll < nll - 1e-12:
                a, b, nll = na, nb, new_nll
                break
            step /= 2.0
        else:
            break
    return float(a), float(b)


def train_linear_svc(train, c: float = 1.0, epochs: int = 100, seed: int = 0) -> ScoringModel:
    require_both_labels(train.y)
    standardizer = Standardizer.fit(train.X)
    Z = standardizer.transform(train.X)
    y_pm = np.where(train.y == 1, 1.0, -1.0)
    weights, intercept = fit_svc_weights(Z, y_pm, c, epochs, seed)
    margins = Z @ weights + intercept
    calibration = fit_platt(margins, train.y)
    return ScoringModel(
        kind="linear_svc",
        standardizer=standardizer,
        params={"weights": weights.tolist(), "intercept": intercept},
        calibration=calibration,
        metadata={
            "seed": seed,
            "hyperparameters": {"c": c, "epochs": epochs},
            "training": {"n_items": len(train), "n_simple": int(train.y.sum())},
        },
    )
