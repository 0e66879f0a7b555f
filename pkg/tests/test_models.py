"""Classifier correctness against independent numerical oracles."""

from __future__ import annotations

import numpy as np
import pytest

from clarte.models import (
    TRAINERS,
    DivergenceError,
    ModelCorruptionError,
    ModelVersionError,
    ScoringModel,
    Standardizer,
    comprehension_score,
    dumps_model,
    fit_platt,
    load_model,
    loads_model,
    predict_proba,
    proba_matrix,
    save_model,
    train_linear_svc,
    train_mlp,
    train_random_forest,
    train_ridge,
    validation_accuracy,
)
from clarte.models.forest import fit_tree
from clarte.models.mlp import init_mlp_params, mlp_loss, mlp_loss_and_grads
from clarte.models.ridge import fit_ridge_weights
from clarte.models.svc import fit_svc_weights, hinge_objective

from conftest import cat_sentence, doc


class DS:
    """Minimal feature/label container accepted by every trainer."""

    def __init__(self, X, y):
        self.X = np.asarray(X, dtype=float)
        self.y = np.asarray(y, dtype=int)

    def __len__(self):
        return len(self.y)


def separable(n=40, p=6, seed=0, margin=1.0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    w = rng.normal(size=p)
    score = X @ w
    y = (score > np.median(score)).astype(int)
    X[y == 1] += margin * w / np.linalg.norm(w)
    return DS(X, y)


# ---------------------------------------------------------------------------
# Standardizer
# ---------------------------------------------------------------------------

def test_standardizer_transform_and_zero_variance():
    X = np.array([[1.0, 5.0], [3.0, 5.0]])
    s = Standardizer.fit(X)
    Z = s.transform(X)
    assert np.allclose(Z[:, 0], [-1.0, 1.0])
    assert np.allclose(Z[:, 1], [0.0, 0.0])  # constant column, std forced to 1
    assert len(s.warnings) == 1 and "zero variance" in s.warnings[0]

    with pytest.raises(ValueError, match="matching 1-D"):
        Standardizer(mean=np.zeros(2), std=np.ones(3))
    with pytest.raises(ValueError, match="positive"):
        Standardizer(mean=np.zeros(2), std=np.array([1.0, 0.0]))


def test_trainers_require_both_labels():
    for name, trainer in TRAINERS.items():
        one_class = DS(np.random.default_rng(0).normal(size=(8, 3)), [1] * 8)
        with pytest.raises(ValueError, match="both labels"):
            trainer(one_class)


# ---------------------------------------------------------------------------
# Ridge: closed form against an independent least-squares formulation
# ---------------------------------------------------------------------------

def test_ridge_matches_augmented_least_squares():
    rng = np.random.default_rng(17)
    for trial in range(50):
        n = int(rng.integers(5, 40))
        p = int(rng.integers(1, 11))
        lam = float(rng.choice([0.1, 1.0, 10.0]))
        Z = rng.normal(size=(n, p))
        y = rng.integers(0, 2, size=n).astype(float)
        weights, intercept = fit_ridge_weights(Z, y, lam)
        assert intercept == y.mean()
        # independent solver: ridge as an augmented ordinary least squares
        centered = Z - Z.mean(axis=0)
        A = np.vstack([centered, np.sqrt(lam) * np.eye(p)])
        b = np.concatenate([y - y.mean(), np.zeros(p)])
        expected, *_ = np.linalg.lstsq(A, b, rcond=None)
        assert np.abs(weights - expected).max() < 1e-8, f"trial {trial}"


def test_ridge_weights_vanish_under_heavy_regularization():
    ds = separable(seed=3)
    weights, intercept = fit_ridge_weights(ds.X, ds.y.astype(float), 1e9)
    assert np.abs(weights).max() < 1e-3
    assert intercept == ds.y.mean()


def test_ridge_label_swap_antisymmetry():
    ds = separable(seed=5)
    w1, b1 = fit_ridge_weights(ds.X, ds.y.astype(float), 1.0)
    w2, b2 = fit_ridge_weights(ds.X, 1.0 - ds.y, 1.0)
    assert np.abs(w1 + w2).max() < 1e-10
    assert abs((b1 + b2) - 1.0) < 1e-12


def test_ridge_rejects_bad_lambda():
    ds = separable()
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError, match="lambda"):
            train_ridge(ds, lam=bad)
        with pytest.raises(ValueError, match="lambda"):
            fit_ridge_weights(ds.X, ds.y.astype(float), bad)


def test_ridge_probabilities_are_clipped():
    ds = separable(seed=2)
    model = train_ridge(ds, lam=0.01)
    extreme = ds.X * 50.0  # far outside the training range
    p = proba_matrix(model, extreme)
    assert p.min() == 0.0 and p.max() == 1.0
    assert ((p >= 0.0) & (p <= 1.0)).all()


def test_ridge_invariant_to_feature_scaling():
    ds = separable(seed=11)
    scaled = DS(ds.X * np.array([1.0, 1000.0, 0.001, 1.0, 1.0, 1.0]), ds.y)
    p1 = proba_matrix(train_ridge(ds), ds.X)
    p2 = proba_matrix(train_ridge(scaled), scaled.X)
    assert np.abs(p1 - p2).max() < 1e-10


# ---------------------------------------------------------------------------
# Linear SVC and its calibration
# ---------------------------------------------------------------------------

def test_svc_objective_improves_and_separates():
    ds = separable(seed=7, margin=2.0)
    s = Standardizer.fit(ds.X)
    Z = s.transform(ds.X)
    y_pm = np.where(ds.y == 1, 1.0, -1.0)
    start = hinge_objective(Z, y_pm, np.zeros(Z.shape[1]), 0.0, 1.0 / len(ds))
    assert start == 1.0
    weights, intercept = fit_svc_weights(Z, y_pm, c=1.0, epochs=60, seed=0)
    final = hinge_objective(Z, y_pm, weights, intercept, 1.0 / len(ds))
    assert final < start

    model = train_linear_svc(ds, epochs=60)
    assert validation_accuracy(model, ds) == 1.0


def test_svc_training_is_deterministic():
    ds = separable(seed=9)
    a = train_linear_svc(ds, epochs=20, seed=1)
    b = train_linear_svc(ds, epochs=20, seed=1)
    assert dumps_model(a) == dumps_model(b)
    c = train_linear_svc(ds, epochs=20, seed=2)
    assert dumps_model(a) != dumps_model(c)


def test_svc_rejects_bad_c():
    ds = separable()
    with pytest.raises(ValueError, match="c must be positive"):
        train_linear_svc(ds, c=0.0)


def test_platt_oriented_and_bounded_on_separated_margins():
    margins = np.array([-5.0, -4.0, -3.0, 3.0, 4.0, 5.0])
    y = np.array([0, 0, 0, 1, 1, 1])
    a, b = fit_platt(margins, y)
    assert np.isfinite(a) and np.isfinite(b)
    assert a > 0.0
    p = 1.0 / (1.0 + np.exp(-(a * margins + b)))
    # smoothed targets keep perfectly separated data off the saturation
    # plateaus (an unsmoothed fit would push the scale toward infinity)
    assert p.max() < 0.99
    assert p.min() > 0.01


def test_platt_survives_extreme_margin_scales():
    y = np.array([0, 0, 0, 1, 1, 1])
    for scale in (1e-6, 1.0, 1e6):
        margins = scale * np.array([-3.0, -2.0, -1.0, 1.0, 2.0, 3.0])
        a, b = fit_platt(margins, y)
        assert np.isfinite(a) and np.isfinite(b)

    constant = np.zeros(6)
    a, b = fit_platt(constant, y)
    assert np.isfinite(a) and np.isfinite(b)


# ---------------------------------------------------------------------------
# Random forest against an exhaustive stump search
# ---------------------------------------------------------------------------

def exhaustive_stump(X, y):
    """Best (weighted Gini, feature, threshold) by brute force, breaking
    ties toward the lower feature index and the earlier threshold."""
    n = len(y)
    best = None
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        for i in range(n - 1):
            if not xs[i] < xs[i + 1]:
                continue
            left, right = ys[: i + 1], ys[i + 1 :]
            score = 0.0
            for part in (left, right):
                q = part.mean()
                score += len(part) * (1.0 - q * q - (1.0 - q) ** 2)
            score /= n
            threshold = (xs[i] + xs[i + 1]) / 2.0
            if best is None or score < best[0]:
                best = (score, f, threshold)
    return best


def test_depth_one_tree_matches_exhaustive_stump():
    rng = np.random.default_rng(23)
    for trial in range(20):
        n = int(rng.integers(8, 30))
        p = int(rng.integers(2, 6))
        X = rng.normal(size=(n, p))
        y = rng.integers(0, 2, size=n).astype(float)
        if y.min() == y.max():
            continue
        tree = fit_tree(X, y, np.random.default_rng(0), max_depth=1,
                        n_candidates=p)
        expected = exhaustive_stump(X, y)
        assert expected is not None
        _, feature, threshold = expected
        assert tree["feature"] == feature, f"trial {trial}"
        assert tree["threshold"] == threshold, f"trial {trial}"
        mask = X[:, feature] <= threshold
        assert tree["left"]["leaf"] == y[mask].mean()
        assert tree["right"]["leaf"] == y[~mask].mean()


def test_forest_respects_max_depth():
    ds = separable(n=60, seed=13)
    model = train_random_forest(ds, n_trees=5, max_depth=2, seed=0)

    def depth(node):
        if "leaf" in node:
            return 0
        return 1 + max(depth(node["left"]), depth(node["right"]))

    assert all(depth(t) <= 2 for t in model.params["trees"])


def test_forest_determinism_and_probability_bounds():
    ds = separable(n=50, seed=19)
    a = train_random_forest(ds, n_trees=20, seed=4)
    b = train_random_forest(ds, n_trees=20, seed=4)
    assert dumps_model(a) == dumps_model(b)
    other = train_random_forest(ds, n_trees=20, seed=5)
    assert dumps_model(a) != dumps_model(other)

    probe = np.random.default_rng(0).normal(size=(30, ds.X.shape[1])) * 10
    p = proba_matrix(a, probe)
    assert ((p >= 0.0) & (p <= 1.0)).all()
    assert validation_accuracy(a, ds) >= 0.9


# ---------------------------------------------------------------------------
# MLP: analytic gradients against central differences
# ---------------------------------------------------------------------------

def numeric_grads(params, X, y, eps=1e-6):
    out = {}
    for key, value in params.items():
        arr = np.atleast_1d(np.asarray(value, dtype=float))
        grad = np.zeros_like(arr)
        flat = arr.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            plus = mlp_loss({**params, key: arr.reshape(np.shape(value))}, X, y)
            flat[i] = orig - eps
            minus = mlp_loss({**params, key: arr.reshape(np.shape(value))}, X, y)
            flat[i] = orig
            grad.ravel()[i] = (plus - minus) / (2 * eps)
        out[key] = grad.reshape(np.shape(value)) if np.shape(value) else float(grad[0])
    return out


def test_mlp_gradients_match_central_differences():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        n, p, hidden = 6, 4, 3
        X = rng.normal(size=(n, p))
        y = rng.integers(0, 2, size=n).astype(float)
        params = init_mlp_params(p, hidden, rng)
        # shift pre-activations away from the ReLU kink so the finite
        # difference stays two-sided differentiable
        params["b1"] = params["b1"] + 0.5
        _, grads = mlp_loss_and_grads(params, X, y)
        numeric = numeric_grads(params, X, y)
        for key in ("w1", "b1", "w2", "b2"):
            diff = np.max(np.abs(np.asarray(grads[key]) - np.asarray(numeric[key])))
            assert diff < 1e-4, f"{key} (seed {seed}): {diff}"


def test_mlp_learns_separable_data():
    ds = separable(n=60, seed=21, margin=2.0)
    model = train_mlp(ds, hidden=16, epochs=300, seed=0)
    assert validation_accuracy(model, ds) >= 0.95


def test_mlp_zero_epochs_returns_untrained_but_usable_model():
    ds = separable(seed=1)
    model = train_mlp(ds, epochs=0, seed=0)
    assert model.metadata["training"]["epochs_run"] == 0
    p = proba_matrix(model, ds.X)
    assert ((p > 0.0) & (p < 1.0)).all()


@pytest.mark.filterwarnings("ignore::RuntimeWarning")  # overflow precedes the raise
def test_mlp_divergence_is_reported():
    ds = separable(seed=6)
    with pytest.raises(DivergenceError):
        train_mlp(ds, lr=1e9, epochs=50, seed=0)


def test_mlp_early_stopping_uses_validation_fold():
    train_ds = separable(n=60, seed=31, margin=0.2)
    valid_ds = separable(n=20, seed=32, margin=0.2)
    model = train_mlp(train_ds, hidden=8, epochs=5000, seed=0, valid=valid_ds)
    assert model.metadata["training"]["epochs_run"] < 5000


def test_mlp_rejects_bad_hidden():
    with pytest.raises(ValueError, match="hidden"):
        train_mlp(separable(), hidden=0)


# ---------------------------------------------------------------------------
# Probability interface
# ---------------------------------------------------------------------------

def test_predict_proba_validates_width_and_finiteness():
    ds = separable(p=5)
    model = train_ridge(ds)
    with pytest.raises(ValueError, match="expected 5 features"):
        predict_proba(model, [1.0, 2.0])
    with pytest.raises(ValueError, match="#2"):
        predict_proba(model, [1.0, 2.0, float("nan"), 0.0, 1.0])


def test_validation_accuracy_ties_go_to_simple():
    X = np.zeros((4, 2))
    y = np.array([1, 1, 0, 0])
    model = ScoringModel(
        kind="ridge",
        standardizer=Standardizer(mean=np.zeros(2), std=np.ones(2)),
        params={"weights": [0.0, 0.0], "intercept": 0.5},
    )
    assert validation_accuracy(model, DS(X, y)) == 0.5


def test_comprehension_score_scales_probability(graded, connectives):
    ds = separable(p=28, seed=8)
    model = train_ridge(ds)
    d = doc(cat_sentence())
    score, warnings = comprehension_score(model, d, graded, connectives)
    assert 0.0 <= score <= 100.0
    from clarte.indicators import extract_features
    fv = extract_features(d, graded, connectives)
    assert score == 100.0 * predict_proba(model, fv)
    assert warnings == fv.warnings


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def all_kinds(ds):
    return {
        "ridge": train_ridge(ds),
        "linear_svc": train_linear_svc(ds, epochs=5),
        "random_forest": train_random_forest(ds, n_trees=3),
        "mlp": train_mlp(ds, hidden=4, epochs=5),
    }


def test_model_round_trip_is_byte_exact(tmp_path):
    models = all_kinds(separable(seed=12))
    for name, model in models.items():
        text = dumps_model(model)
        assert dumps_model(loads_model(text)) == text, name
        path = tmp_path / f"{name}.json"
        save_model(model, path)
        reloaded = load_model(path)
        assert dumps_model(reloaded) == text
        probe = np.random.default_rng(1).normal(size=(5, 6))
        assert np.array_equal(proba_matrix(model, probe),
                              proba_matrix(reloaded, probe))


def test_model_load_error_reporting():
    model = train_ridge(separable(seed=14))
    text = dumps_model(model)

    with pytest.raises(ModelCorruptionError, match="not a valid model file"):
        loads_model(text[: len(text) // 2])
    with pytest.raises(ModelCorruptionError, match="not a model file"):
        loads_model('{"format": "something-else", "version": 1}')

    import json
    envelope = json.loads(text)
    envelope["version"] = 99
    with pytest.raises(ModelVersionError, match="99"):
        loads_model(json.dumps(envelope))

    envelope = json.loads(text)
    envelope["body"]["params"]["intercept"] += 0.25
    with pytest.raises(ModelCorruptionError, match="checksum"):
        loads_model(json.dumps(envelope))

    envelope = json.loads(text)
    del envelope["body"]
    with pytest.raises(ModelCorruptionError, match="missing body"):
        loads_model(json.dumps(envelope))

    assert issubclass(ModelCorruptionError, ValueError)
    assert issubclass(ModelVersionError, ValueError)
