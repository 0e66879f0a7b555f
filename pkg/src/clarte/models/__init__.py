"""Classifiers for the simple-vs-complex proxy task and the score head."""

from .base import (
    MODEL_KINDS,
    DivergenceError,
    ScoringModel,
    Standardizer,
    comprehension_score,
    predict_proba,
    proba_matrix,
    validation_accuracy,
)
from .forest import fit_tree, train_random_forest
from .io import (
    MODEL_VERSION,
    ModelCorruptionError,
    ModelVersionError,
    dumps_model,
    load_model,
    loads_model,
    save_model,
)
from .mlp import init_mlp_params, mlp_forward, mlp_loss, mlp_loss_and_grads, train_mlp
from .ridge import fit_ridge_weights, train_ridge
from .svc import fit_platt, fit_svc_weights, hinge_objective, train_linear_svc

TRAINERS = {
    "ridge": train_ridge,
    "linear_svc": train_linear_svc,
    "random_forest": train_random_forest,
    "mlp": train_mlp,
}

__all__ = [
    "MODEL_KINDS",
    "MODEL_VERSION",
    "TRAINERS",
    "DivergenceError",
    "ModelCorruptionError",
    "ModelVersionError",
    "ScoringModel",
    "Standardizer",
    "comprehension_score",
    "dumps_model",
    "fit_platt",
    "fit_ridge_weights",
    "fit_svc_weights",
    "fit_tree",
    "hinge_objective",
    "init_mlp_params",
    "load_model",
    "loads_model",
    "mlp_forward",
    "mlp_loss",
    "mlp_loss_and_grads",
    "predict_proba",
    "proba_matrix",
    "save_model",
    "train_linear_svc",
    "train_mlp",
    "train_random_forest",
    "train_ridge",
    "validation_accuracy",
]
