"""Four classical classifiers over combined sparse+dense vectors.

All four are trained from scratch (no external learner), deterministic
given (spec, seed, data order), and immutable once trained. Prediction
ties always resolve to label 0, the non-fake class.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DataError
from ..vectorize import CombinedVector
from .common import (
    DEFAULT_HYPERPARAMETERS,
    KINDS,
    RAW_FEATURE_KINDS,
    ModelSpec,
    TrainedModel,
    densify,
)
from .forest import forest_vote_fraction, train_random_forest
from .linear import linear_margin, logreg_gradient, logreg_loss, train_linear_svm, train_logreg
from .naive_bayes import mnb_score, train_mnb
from .serialize import LoadedModel, load_model, read_header, resolve_created_at, save_model

__all__ = [
    "DEFAULT_HYPERPARAMETERS",
    "KINDS",
    "RAW_FEATURE_KINDS",
    "LoadedModel",
    "ModelSpec",
    "TrainedModel",
    "decision_score",
    "display_name",
    "load_model",
    "logreg_gradient",
    "logreg_loss",
    "predict",
    "predict_all",
    "read_header",
    "resolve_created_at",
    "save_model",
    "train",
    "train_linear_svm",
    "train_logreg",
    "train_mnb",
    "train_random_forest",
]

_DISPLAY_NAMES = {
    "mnb": "MNB",
    "logreg": "Logistic Regression",
    "linear_svm": "SVM",
    "random_forest": "Random Forest",
}


def display_name(kind: str) -> str:
    return _DISPLAY_NAMES.get(kind, kind)


def train(
    spec: ModelSpec,
    data: Sequence[CombinedVector],
    n_sparse: int | None = None,
    n_dense: int | None = None,
    vectorizer_fingerprint: str = "",
) -> TrainedModel:
    """Train any kind from its spec; hyperparameters are validated there."""
    hp = spec.hyperparameters
    kwargs = dict(
        seed=spec.seed,
        n_sparse=n_sparse,
        n_dense=n_dense,
        vectorizer_fingerprint=vectorizer_fingerprint,
    )
    if spec.kind == "mnb":
        return train_mnb(data, alpha=hp["alpha"], **kwargs)
    if spec.kind == "logreg":
        return train_logreg(data, lam=hp["lam"], epochs=hp["epochs"], lr0=hp["lr0"], **kwargs)
    if spec.kind == "linear_svm":
        return train_linear_svm(data, C=hp["C"], epochs=hp["epochs"], **kwargs)
    if spec.kind == "random_forest":
        return train_random_forest(
            data,
            n_trees=hp["n_trees"],
            max_features=hp["max_features"],
            min_leaf=hp["min_leaf"],
            **kwargs,
        )
    raise DataError(f"unknown model kind {spec.kind!r}")


def decision_score(model: TrainedModel, v: CombinedVector) -> float:
    """Probability for mnb/logreg, signed margin for the SVM, vote
    fraction for the forest; pure, never mutates the model."""
    x = densify(v, model)
    kind = model.spec.kind
    if kind == "mnb":
        return mnb_score(model, x)
    if kind == "logreg":
        z = linear_margin(model, x)
        return float(1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0))))
    if kind == "linear_svm":
        return linear_margin(model, x)
    if kind == "random_forest":
        return forest_vote_fraction(model, x)
    raise DataError(f"unknown model kind {kind!r}")


def predict(model: TrainedModel, v: CombinedVector) -> int:
    """Thresholded decision score (0.5 for probabilistic kinds, 0 for the
    SVM margin, vote fraction for the forest); exact ties go to 0.

    Probabilistic kinds compare log-odds against 0 so an exact tie is
    an exact float comparison, not a rounded probability.
    """
    x = densify(v, model)
    kind = model.spec.kind
    if kind == "mnb":
        joint = model.params["class_log_prior"] + model.params["feature_log_prob"] @ x
        return 1 if joint[1] > joint[0] else 0
    if kind in ("logreg", "linear_svm"):
        return 1 if linear_margin(model, x) > 0.0 else 0
    if kind == "random_forest":
        return 1 if forest_vote_fraction(model, x) > 0.5 else 0
    raise DataError(f"unknown model kind {kind!r}")


def predict_all(model: TrainedModel, vectors: Sequence[CombinedVector]) -> list[int]:
    return [predict(model, v) for v in vectors]
