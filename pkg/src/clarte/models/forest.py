"""Random forest of CART trees: Gini impurity, midpoint thresholds,
bootstrap resampling, a random feature subset at every node.

Leaves store the fraction of simple-class items that reached them; the
forest probability is the mean leaf fraction over trees.  Every tree gets
its own generator derived from the forest seed, so training is
reproducible and could run per-tree in parallel without changing output.
"""

from __future__ import annotations

import math

import numpy as np

from .base import ScoringModel, Standardizer, require_both_labels


def _best_split_for_feature(x: np.ndarray, y: np.ndarray):
    """Best (weighted child Gini, midpoint threshold) along one feature, or
    None if the feature is constant."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    n = len(ys)
    cuts = np.flatnonzero(xs[:-1] < xs[1:])
    if cuts.size == 0:
        return None
    pos_prefix = np.cumsum(ys)
    total_pos = pos_prefix[-1]
    left_n = cuts + 1.0
    right_n = n - left_n
    left_pos = pos_prefix[cuts]
    right_pos = total_pos - left_pos
    gini_left = 1.0 - (left_pos / left_n) ** 2 - ((left_n - left_pos) / left_n) ** 2
    gini_right = 1.0 - (right_pos / right_n) ** 2 \
        - ((right_n - right_pos) / right_n) ** 2
    weighted = (left_n * gini_left + right_n * gini_right) / n
    best = int(np.argmin(weighted))
    i = cuts[best]
    return float(weighted[best]), float((xs[i] + xs[i + 1]) / 2.0)


def fit_tree(X: np.ndarray, y: np.ndarray, rng: np.random.Generator,
             max_depth: int | None, n_candidates: int, depth: int = 0) -> dict:
    """Grow one CART tree; nodes are plain dicts so trees serialize as-is."""
    if len(y) == 0:
        raise ValueError("empty node")
    mean = float(y.mean())
    if mean in (0.0, 1.0) or len(y) < 2 \
            or (max_depth is not None and depth >= max_depth):
        return {"leaf": mean}
    p = X.shape[1]
    k = min(n_candidates, p)
    candidates = np.sort(rng.choice(p, size=k, replace=False))
    best = None
    for f in candidates:
        found = _best_split_for_feature(X[:, f], y)
        if found is None:
            continue
        score, threshold = found
        if best is None or score < best[0]:
            best = (score, int(f), threshold)
    if best is None:
        return {"leaf": mean}
    _, feature, threshold = best
    mask = X[:, feature] <= threshold
    return {
        "feature": feature,
        "threshold": threshold,
        "left": fit_tree(X[mask], y[mask], rng, max_depth, n_candidates, depth + 1),
        "right": fit_tree(X[~mask], y[~mask], rng, max_depth, n_candidates, depth + 1),
    }


def train_random_forest(train, n_trees: int = 100, max_depth: int | None = None,
                        seed: int = 0, n_candidate_features: int | None = None,
                        bootstrap: bool = True) -> ScoringModel:
    if n_trees < 1:
        raise ValueError("n_trees must be at least 1")
    require_both_labels(train.y)
    standardizer = Standardizer.fit(train.X)
    Z = standardizer.transform(train.X)
    y = train.y.astype(float)
    n, p = Z.shape
    k = n_candidate_features if n_candidate_features is not None \
        else math.ceil(math.sqrt(p))
    trees = []
    for child_seed in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child_seed)
        idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        trees.append(fit_tree(Z[idx], y[idx], rng, max_depth, k))
    return ScoringModel(
        kind="random_forest",
        standardizer=standardizer,
        params={"trees": trees},
        calibration=None,
        metadata={
            "seed": seed,
            "hyperparameters": {
                "n_trees": n_trees,
                "max_depth": max_depth,
                "n_candidate_features": k,
                "bootstrap": bootstrap,
            },
            "training": {"n_items": len(train), "n_simple": int(train.y.sum())},
        },
    )
