"""One-hidden-layer perceptron: ReLU hidden layer, sigmoid output, binary
cross-entropy, full-batch gradient descent.

The gradient function is exposed on its own so it can be checked against
central finite differences.
"""

from __future__ import annotations

import numpy as np

from .base import DivergenceError, ScoringModel, Standardizer, require_both_labels

_EPS = 1e-12


def init_mlp_params(n_features: int, hidden: int, rng: np.random.Generator) -> dict:
    """Uniform init in +-sqrt(6/(fan_in + fan_out)) per layer, zero biases."""
    limit1 = np.sqrt(6.0 / (n_features + hidden))
    limit2 = np.sqrt(6.0 / (hidden + 1))
    return {
        "w1": rng.uniform(-limit1, limit1, size=(n_features, hidden)),
        "b1": np.zeros(hidden),
        "w2": rng.uniform(-limit2, limit2, size=hidden),
        "b2": 0.0,
    }


def mlp_forward(params: dict, X: np.ndarray):
    pre = X @ params["w1"] + params["b1"]
    act = np.maximum(pre, 0.0)
    logits = act @ params["w2"] + params["b2"]
    probs = 1.0 / (1.0 + np.exp(-np.clip(logits, -500, 500)))
    return pre, act, probs


def mlp_loss(params: dict, X: np.ndarray, y: np.ndarray) -> float:
    _, _, probs = mlp_forward(params, X)
    probs = np.clip(probs, _EPS, 1.0 - _EPS)
    return float(-(y * np.log(probs) + (1 - y) * np.log(1 - probs)).mean())


def mlp_loss_and_grads(params: dict, X: np.ndarray, y: np.ndarray):
    """Mean binary cross-entropy and its exact gradients."""
    pre, act, probs = mlp_forward(params, X)
    clipped = np.clip(probs, _EPS, 1.0 - _EPS)
    loss = float(-(y * np.log(clipped) + (1 - y) * np.log(1 - clipped)).mean())
    n = len(y)
    dlogits = (probs - y) / n
    grads = {
        "w2": act.T @ dlogits,
        "b2": float(dlogits.sum()),
    }
    dact = np.outer(dlogits, params["w2"])
    dpre = dact * (pre > 0)
    grads["w1"] = X.T @ dpre
    grads["b1"] = dpre.sum(axis=0)
    return loss, grads


def train_mlp(train, hidden: int = 32, lr: float = 0.01, epochs: int = 200,
              seed: int = 0, valid=None) -> ScoringModel:
    """Full-batch gradient descent; with a validation fold, stops once the
    validation loss has not improved for 20 epochs and keeps the best
    parameters seen."""
    if hidden < 1:
        raise ValueError("hidden must be at least 1")
    require_both_labels(train.y)
    standardizer = Standardizer.fit(train.X)
    Z = standardizer.transform(train.X)
    y = train.y.astype(float)
    rng = np.random.default_rng(seed)
    params = init_mlp_params(Z.shape[1], hidden, rng)

    Zv = yv = None
    if valid is not None:
        Zv = standardizer.transform(valid.X)
        yv = valid.y.astype(float)
    best_loss = np.inf
    best_params = {k: np.copy(v) if isinstance(v, np.ndarray) else v
                   for k, v in params.items()}
    patience = 20
    stale = 0
    ran = 0
    for epoch in range(epochs):
        loss, grads = mlp_loss_and_grads(params, Z, y)
        if not np.isfinite(loss):
            raise DivergenceError(f"non-finite loss at epoch {epoch}")
        params = {
            "w1": params["w1"] - lr * grads["w1"],
            "b1": params["b1"] - lr * grads["b1"],
            "w2": params["w2"] - lr * grads["w2"],
            "b2": params["b2"] - lr * grads["b2"],
        }
        ran = epoch + 1
        if Zv is not None:
            vloss = mlp_loss(params, Zv, yv)
            if not np.isfinite(vloss):
                raise DivergenceError(f"non-finite validation loss at epoch {epoch}")
            if vloss < best_loss - 1e-12:
                best_loss = vloss
                best_params = {k: np.copy(v) if isinstance(v, np.ndarray) else v
                               for k, v in params.items()}
                stale = 0
            else:
                stale += 1
                if stale >= patience:
                    break
    if Zv is not None and np.isfinite(best_loss):
        params = best_params
    return ScoringModel(
        kind="mlp",
        standardizer=standardizer,
        params={
            "w1": np.asarray(params["w1"]).tolist(),
            "b1": np.asarray(params["b1"]).tolist(),
            "w2": np.asarray(params["w2"]).tolist(),
            "b2": float(params["b2"]),
        },
        calibration=None,
        metadata={
            "seed": seed,
            "hyperparameters": {"hidden": hidden, "lr": lr, "epochs": epochs},
            "training": {
                "n_items": len(train),
                "n_simple": int(train.y.sum()),
                "epochs_run": ran,
            },
        },
    )
