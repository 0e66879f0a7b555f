"""Shared model container, standardization, scoring entry points.

All four classifier kinds share one serializable container; the score of a
document is 100 times the calibrated probability that it belongs to the
"simple" class, so 100 reads as perfectly clear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..documents import Document
from ..indicators import FEATURE_NAMES, FeatureVector, extract_features

MODEL_KINDS = ("ridge", "linear_svc", "random_forest", "mlp")


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise ValueError("mean and std must be matching 1-D arrays")
        if not (self.std > 0).all():
            raise ValueError("std components must be positive")

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        warnings = []
        for i in np.flatnonzero(std == 0):
            name = FEATURE_NAMES[i] if X.shape[1] == len(FEATURE_NAMES) else f"#{i}"
            warnings.append(f"feature {name} has zero variance; std set to 1")
        std = np.where(std == 0, 1.0, std)
        return cls(mean=mean, std=std, warnings=tuple(warnings))

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.std


@dataclass(frozen=True)
class ScoringModel:
    """A trained classifier: kind-specific parameters plus the fitted
    standardizer and optional sigmoid calibration (scale, offset)."""

    kind: str
    standardizer: Standardizer
    params: dict
    calibration: tuple[float, float] | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")


def require_both_labels(y: np.ndarray) -> None:
    present = set(np.unique(y).tolist())
    if present != {0, 1}:
        raise ValueError("training data must contain both labels")


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def _tree_fraction(node: dict, x: np.ndarray) -> float:
    while "leaf" not in node:
        node = node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]
    return float(node["leaf"])


def proba_matrix(model: ScoringModel, X: np.ndarray) -> np.ndarray:
    """Vectorized probability-of-simple over raw (unstandardized) rows."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    Z = model.standardizer.transform(X)
    if model.kind == "ridge":
        raw = Z @ np.asarray(model.params["weights"]) + model.params["intercept"]
        return np.clip(raw, 0.0, 1.0)
    if model.kind == "linear_svc":
        margin = Z @ np.asarray(model.params["weights"]) + model.params["intercept"]
        a, b = model.calibration
        return _sigmoid(a * margin + b)
    if model.kind == "random_forest":
        trees = model.params["trees"]
        out = np.zeros(len(Z))
        for i, z in enumerate(Z):
            out[i] = sum(_tree_fraction(t, z) for t in trees) / len(trees)
        return out
    if model.kind == "mlp":
        w1 = np.asarray(model.params["w1"])
        b1 = np.asarray(model.params["b1"])
        w2 = np.asarray(model.params["w2"])
        b2 = model.params["b2"]
        hidden = np.maximum(Z @ w1 + b1, 0.0)
        return _sigmoid(hidden @ w2 + b2)
    raise AssertionError(model.kind)


def predict_proba(model: ScoringModel, fv: FeatureVector | Sequence[float]) -> float:
    """Probability that the text is simple, in [0, 1]."""
    values = fv.values if isinstance(fv, FeatureVector) else fv
    x = np.asarray(values, dtype=float)
    if x.shape != model.standardizer.mean.shape:
        raise ValueError(
            f"expected {model.standardizer.mean.shape[0]} features, got {x.shape}"
        )
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        i = int(bad[0])
        name = FEATURE_NAMES[i] if x.size == len(FEATURE_NAMES) else f"#{i}"
        raise ValueError(f"feature {name} is not finite")
    return float(proba_matrix(model, x)[0])


def comprehension_score(model: ScoringModel, doc: Document, graded,
                        connectives) -> tuple[float, tuple[str, ...]]:
    """100 x probability-of-simple for a document, with extraction warnings."""
    fv = extract_features(doc, graded, connectives)
    return 100.0 * predict_proba(model, fv), fv.warnings


def validation_accuracy(model: ScoringModel, valid) -> float:
    """Fraction of items where thresholding the probability at 0.5 (ties to
    the simple class) recovers the label."""
    p = proba_matrix(model, valid.X)
    predicted = (p >= 0.5).astype(int)
    return float((predicted == valid.y).mean())


def margin_matrix(weights: np.ndarray, intercept: float, Z: np.ndarray) -> np.ndarray:
    return Z @ weights + intercept


def finite_or_raise(value: float, context: str) -> None:
    if not math.isfinite(value):
        raise DivergenceError(context)
