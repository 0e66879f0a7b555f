"""Acceptance gate: formula exactness, oracle equivalence, calibration of
the reliability statistics, and an end-to-end reproduction of the expected
qualitative behaviour on the synthetic corpus.

Each test is one criterion; `pytest -v` therefore emits one pass/fail line
per criterion. Every randomized construction is fully seeded, so observed
values quoted in comments are frozen, not flaky."""

import json
import math
import time
import warnings

import numpy as np
import pytest

from clarte.baselines import (ReadabilityCounts, compute_counts, fkgl,
                              gunning_fog, smog)
from clarte.cli import run as cli_run
from clarte.corpus import dataset_from_documents, split_train_valid
from clarte.evaluation import (BwsResponse, bws_scores, generate_bws_design,
                               icc2, spearman, split_half_reliability)
from clarte.indicators import extract_features
from clarte.lexicons import default_connectives, default_graded_lexicon
from clarte.models import (TRAINERS, proba_matrix, train_random_forest,
                           validation_accuracy)
from clarte.models.forest import fit_tree
from clarte.models.mlp import init_mlp_params, mlp_loss, mlp_loss_and_grads
from clarte.models.ridge import fit_ridge_weights
from clarte.synth import generate_continuum, generate_corpus


# ---------------------------------------------------------------------------
# Readability formula exactness
# ---------------------------------------------------------------------------

def test_readability_formulas_are_exact():
    start = time.perf_counter()

    counts = ReadabilityCounts(words=20, sentences=2, syllables=30,
                               polysyllables=0)
    assert abs(fkgl(counts) - 6.01) <= 1e-9

    counts = ReadabilityCounts(words=100, sentences=30, syllables=300,
                               polysyllables=30)
    assert abs(smog(counts) - (1.0430 * math.sqrt(30.0) + 3.1291)) <= 1e-9

    counts = ReadabilityCounts(words=100, sentences=5, syllables=300,
                               polysyllables=10)
    assert abs(gunning_fog(counts) - 12.0) <= 1e-9

    assert time.perf_counter() - start < 1.0


# ---------------------------------------------------------------------------
# BWS arithmetic
# ---------------------------------------------------------------------------

def test_bws_score_is_best_minus_worst_percentage():
    # 36 judgments on one tuple: "a" is best 18 times and worst 9 times,
    # so score(a) = 100*18/36 - 100*9/36 = 25 exactly.
    design = {"t1": ("a", "b", "c")}
    responses = (
        [BwsResponse("t1", f"j{i}", "a", "b") for i in range(18)]
        + [BwsResponse("t1", f"j{18 + i}", "b", "a") for i in range(9)]
        + [BwsResponse("t1", f"j{27 + i}", "c", "b") for i in range(9)]
    )
    scores = bws_scores(responses, design)
    assert scores["a"] == 25.0
    assert scores["b"] == 100.0 * (9 - 27) / 36  # best 9, worst 18 + 9
    assert scores["c"] == 100.0 * (9 - 0) / 36


# ---------------------------------------------------------------------------
# Design invariants at study scale
# ---------------------------------------------------------------------------

def test_design_invariants_at_study_scale():
    start = time.perf_counter()
    ids = [f"txt{i:02d}" for i in range(48)]
    design = generate_bws_design(ids, e=12, k=3, a=3, seed=0)

    assert len(design.tuples) == 192  # 48 * 12 / 3

    appearances = {t: 0 for t in ids}
    for tup in design.tuples:
        assert len(tup.members) == 3
        assert len(set(tup.members)) == 3
        for member in tup.members:
            appearances[member] += 1
    assert all(count == 12 for count in appearances.values())
    assert time.perf_counter() - start < 5.0


# ---------------------------------------------------------------------------
# SHR calibration
# ---------------------------------------------------------------------------

def test_shr_separates_consistent_from_random_annotators():
    start = time.perf_counter()
    ids = [f"x{i:02d}" for i in range(48)]

    # dense self-consistent set, every judgment duplicated
    design = generate_bws_design(ids, e=96, k=3, a=2, seed=5)
    rank = {tid: i for i, tid in
            enumerate(np.random.default_rng(11).permutation(design.texts))}
    duplicated = []
    for tup in design.tuples:
        ordered = sorted(tup.members, key=lambda m: rank[m])
        for copy in range(2):
            duplicated.append(BwsResponse(tup.tuple_id, f"a{copy}",
                                          ordered[-1], ordered[0]))
    high = split_half_reliability(duplicated, design, iterations=1000, seed=0)
    assert high >= 98.0  # frozen value 99.00

    # uniform-random responses on the study-scale design
    null_design = generate_bws_design(ids, e=12, k=3, a=2, seed=5)
    rng = np.random.default_rng(2)
    random_responses = []
    for tup in null_design.tuples:
        for copy in range(2):
            pick = rng.permutation(3)
            random_responses.append(BwsResponse(
                tup.tuple_id, f"a{copy}",
                tup.members[pick[0]], tup.members[pick[1]]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        low = split_half_reliability(random_responses, null_design,
                                     iterations=1000, seed=0)
    assert abs(low) <= 10.0  # frozen value -3.87

    assert time.perf_counter() - start < 30.0


# ---------------------------------------------------------------------------
# ICC(2,1) oracle
# ---------------------------------------------------------------------------

def icc2_anova_oracle(x):
    n, k = x.shape
    grand = x.mean()
    row = x.mean(axis=1)
    col = x.mean(axis=0)
    msr = k * ((row - grand) ** 2).sum() / (n - 1)
    msc = n * ((col - grand) ** 2).sum() / (k - 1)
    residual = x - row[:, None] - col[None, :] + grand
    mse = (residual ** 2).sum() / ((n - 1) * (k - 1))
    return (msr - mse) / (msr + (k - 1) * mse + k * (msc - mse) / n)


def test_icc2_matches_anova_oracle_on_random_matrices():
    rng = np.random.default_rng(101)
    for trial in range(100):
        n = int(rng.integers(4, 21))
        k = int(rng.integers(2, 7))
        x = rng.normal(size=(n, k)) * rng.uniform(0.5, 10.0) + rng.normal()
        assert abs(icc2(x) - icc2_anova_oracle(x)) < 1e-6, f"trial {trial}"

    column = np.array([4.0, 9.0, 1.0, 6.5, 3.0, 8.0])
    perfect = np.tile(column[:, None], (1, 4))
    assert icc2(perfect) == 1.0


# ---------------------------------------------------------------------------
# Ridge oracle
# ---------------------------------------------------------------------------

def test_ridge_matches_normal_equations():
    rng = np.random.default_rng(55)
    for trial in range(50):
        n = int(rng.integers(5, 40))
        p = int(rng.integers(1, 11))
        lam = float(rng.choice([0.1, 1.0, 10.0]))
        Z = rng.normal(size=(n, p))
        y = rng.integers(0, 2, size=n).astype(float)

        weights, intercept = fit_ridge_weights(Z, y, lam)

        centered = Z - Z.mean(axis=0)
        gram = centered.T @ centered + lam * np.eye(p)
        expected = np.linalg.solve(gram, centered.T @ (y - y.mean()))
        assert np.abs(weights - expected).max() < 1e-8, f"trial {trial}"
        assert intercept == y.mean()


# ---------------------------------------------------------------------------
# MLP gradient check
# ---------------------------------------------------------------------------

def test_mlp_analytic_gradients_match_central_differences():
    worst = 0.0
    for seed in range(5):
        rng = np.random.default_rng(seed)
        n, p, hidden = 6, 4, 3
        X = rng.normal(size=(n, p))
        y = rng.integers(0, 2, size=n).astype(float)
        params = init_mlp_params(p, hidden, rng)
        params["b1"] = params["b1"] + 0.5  # keep units off the ReLU kink

        _, analytic = mlp_loss_and_grads(params, X, y)
        for key in ("w1", "b1", "w2", "b2"):
            value = np.atleast_1d(np.asarray(params[key], dtype=float))
            numeric = np.zeros_like(value)
            flat = value.ravel()
            eps = 1e-6
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + eps
                plus = mlp_loss({**params, key: value.reshape(
                    np.shape(params[key]))}, X, y)
                flat[i] = orig - eps
                minus = mlp_loss({**params, key: value.reshape(
                    np.shape(params[key]))}, X, y)
                flat[i] = orig
                numeric.ravel()[i] = (plus - minus) / (2 * eps)
            a = np.atleast_1d(np.asarray(analytic[key], dtype=float))
            scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(numeric)))
            worst = max(worst, float((np.abs(a - numeric) / scale).max()))
    assert worst < 1e-4


# ---------------------------------------------------------------------------
# Forest oracle
# ---------------------------------------------------------------------------

def exhaustive_stump(x, y):
    """Best threshold on a single feature by brute force (weighted Gini,
    earliest threshold on ties), with the two leaf class means."""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(y)
    best = None
    for i in range(n - 1):
        if not xs[i] < xs[i + 1]:
            continue
        left, right = ys[: i + 1], ys[i + 1:]
        score = 0.0
        for part in (left, right):
            q = part.mean()
            score += len(part) * (1.0 - q * q - (1.0 - q) ** 2)
        score /= n
        if best is None or score < best[0]:
            best = (score, (xs[i] + xs[i + 1]) / 2.0,
                    left.mean(), right.mean())
    return best


class _DS:
    def __init__(self, X, y):
        self.X = np.asarray(X, float)
        self.y = np.asarray(y, int)

    def __len__(self):
        return len(self.y)


def test_depth_one_tree_equals_exhaustive_stump_search():
    rng = np.random.default_rng(77)
    checked = 0
    while checked < 20:
        n = int(rng.integers(8, 40))
        x = rng.normal(size=n)
        y = rng.integers(0, 2, size=n).astype(float)
        if y.min() == y.max() or len(np.unique(x)) < 2:
            continue
        expected = exhaustive_stump(x, y)
        assert expected is not None
        _, threshold, left_mean, right_mean = expected

        tree = fit_tree(x[:, None], y, np.random.default_rng(0),
                        max_depth=1, n_candidates=1)
        assert tree["feature"] == 0
        assert tree["threshold"] == threshold
        assert tree["left"]["leaf"] == left_mean
        assert tree["right"]["leaf"] == right_mean

        # the same equality must survive the full training path
        model = train_random_forest(_DS(x[:, None], y), n_trees=1,
                                    max_depth=1, seed=0, bootstrap=False)
        probabilities = proba_matrix(model, x[:, None])
        stump_prediction = np.where(x <= threshold, left_mean, right_mean)
        assert np.abs(probabilities - stump_prediction).max() < 1e-12
        checked += 1


# ---------------------------------------------------------------------------
# End-to-end reproduction on the synthetic corpus
# ---------------------------------------------------------------------------

def test_end_to_end_synthetic_reproduction():
    start = time.perf_counter()
    graded = default_graded_lexicon()
    connectives = default_connectives()

    corpus = generate_corpus(n_simple=500, n_complex=500, seed=0)
    dataset, extraction_warnings = dataset_from_documents(
        corpus.documents, graded, connectives)
    assert extraction_warnings == []
    train, valid = split_train_valid(dataset, 0.10, seed=0)
    assert len(valid.doc_ids) == 100

    continuum = generate_continuum(n=200, seed=1)
    clarity = np.array([continuum.clarity[d.id] for d in continuum.documents])
    X = np.array([extract_features(d, graded, connectives).values
                  for d in continuum.documents])

    models = {
        "ridge": TRAINERS["ridge"](train),
        "linear_svc": TRAINERS["linear_svc"](train, epochs=100, seed=0),
        "random_forest": TRAINERS["random_forest"](train, n_trees=300,
                                                   seed=0),
        "mlp": TRAINERS["mlp"](train, epochs=800, seed=0, valid=valid),
    }

    rho = {}
    for name, model in models.items():
        accuracy = validation_accuracy(model, valid)
        assert accuracy >= 0.90, f"{name}: validation accuracy {accuracy}"
        rho[name] = spearman(100.0 * proba_matrix(model, X), clarity)
        assert rho[name] >= 0.80, f"{name}: continuum rho {rho[name]}"

    for name, formula in (("fkgl", fkgl), ("smog", smog),
                          ("gunning_fog", gunning_fog)):
        values = [formula(compute_counts(d)) for d in continuum.documents]
        baseline_rho = spearman(values, clarity)
        assert baseline_rho < 0.0, f"{name}: rho {baseline_rho}"

    assert rho["random_forest"] >= rho["ridge"] - 0.05
    assert time.perf_counter() - start < 300.0


# ---------------------------------------------------------------------------
# Pipeline determinism
# ---------------------------------------------------------------------------

def test_pipeline_rerun_is_byte_identical(tmp_path):
    out = tmp_path / "run"

    def pipeline():
        assert cli_run(["--quiet", "synth-corpus", "--n-simple", "120",
                        "--n-complex", "120", "--continuum", "40",
                        "--out-dir", str(out)]) == 0
        assert cli_run(["--quiet", "train", "--model", "ridge",
                        "--train", str(out / "train.tsv"),
                        "--out", str(out / "model.json")]) == 0
        assert cli_run(["--quiet", "report",
                        "--data", str(out / "continuum.tsv"),
                        "--model-file", f"ridge={out / 'model.json'}",
                        "--out", str(out / "report.tsv")]) == 0
        return {p.name: p.read_bytes() for p in sorted(out.iterdir())}

    first = pipeline()
    second = pipeline()
    assert set(first) == {"train.tsv", "continuum.tsv", "manifest.json",
                          "model.json", "model.json.manifest.json",
                          "report.tsv", "report.tsv.manifest.json"}
    assert first == second

    report = (out / "report.tsv").read_text("utf-8").splitlines()
    assert report[0] == "scorer\trho_x100"
    assert json.loads(
        (out / "model.json.manifest.json").read_text("utf-8"))["config"]
