"""Multinomial naive Bayes with Laplace smoothing.

Operates on nonnegative feature mass (raw TF-IDF weights plus raw
binary metadata), so it is fed unstandardized vectors. Smoothing keeps
every likelihood strictly positive:

    p(t|c) = (alpha + mass of feature t in class c)
             / (alpha * V + total feature mass in class c)

with V the combined feature dimension. Priors are class frequencies.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DataError
from ..vectorize import CombinedVector
from .common import ModelSpec, TrainedModel, infer_dims, require_both_classes, stack


def train_mnb(
    data: Sequence[CombinedVector],
    alpha: float = 1.0,
    seed: int = 0,
    n_sparse: int | None = None,
    n_dense: int | None = None,
    vectorizer_fingerprint: str = "",
) -> TrainedModel:
    spec = ModelSpec(kind="mnb", hyperparameters={"alpha": alpha}, seed=seed)
    if n_sparse is None or n_dense is None:
        inferred_sparse, inferred_dense = infer_dims(data)
        n_sparse = inferred_sparse if n_sparse is None else n_sparse
        n_dense = inferred_dense if n_dense is None else n_dense
    X, y = stack(data, n_sparse, n_dense)
    require_both_classes(y, "mnb")
    if (X < 0).any():
        raise DataError("mnb: feature values must be nonnegative")

    n, d = X.shape
    class_log_prior = np.zeros(2, dtype=np.float64)
    feature_log_prob = np.zeros((2, d), dtype=np.float64)
    for c in (0, 1):
        mask = y == c
        class_log_prior[c] = np.log(mask.sum() / n)
        counts = X[mask].sum(axis=0)
        feature_log_prob[c] = np.log((alpha + counts) / (alpha * d + counts.sum()))

    return TrainedModel(
        spec=spec,
        n_sparse=n_sparse,
        n_dense=n_dense,
        params={
            "class_log_prior": class_log_prior,
            "feature_log_prob": feature_log_prob,
        },
        vectorizer_fingerprint=vectorizer_fingerprint,
    )


def mnb_score(model: TrainedModel, x: np.ndarray) -> float:
    """Posterior probability of class 1."""
    joint = model.params["class_log_prior"] + model.params["feature_log_prob"] @ x
    return float(np.exp(joint[1] - np.logaddexp(joint[0], joint[1])))
