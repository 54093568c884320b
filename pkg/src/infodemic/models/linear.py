"""Linear classifiers trained by seeded stochastic (sub)gradient descent.

Logistic regression minimizes L2-regularized log-loss with a decaying
step lr0/(1 + lam*lr0*t); the bias is unregularized. The SVM minimizes
the primal hinge objective Pegasos-style: lambda = 1/(C*N), step
1/(lambda*t), labels mapped to {-1,+1}. Its bias rides along as a
regularized constant-1 coordinate, which keeps the objective strongly
convex (a free-floating bias destroys the 1/(lambda*t) schedule's
convergence and stalls badly on rescaled inputs). Both shuffle per
epoch with a seeded generator, so training is a deterministic function
of (data order, seed).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DataError
from ..vectorize import CombinedVector
from .common import ModelSpec, TrainedModel, infer_dims, require_both_classes, stack


def _sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def logreg_loss(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, lam: float
) -> float:
    """Mean cross-entropy plus (lam/2)*||w||^2; the finite-difference
    oracle in the tests differentiates exactly this."""
    z = X @ w + b
    ce = np.logaddexp(0.0, -z) * y + np.logaddexp(0.0, z) * (1.0 - y)
    return float(ce.mean() + 0.5 * lam * float(w @ w))


def logreg_gradient(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, lam: float
) -> tuple[np.ndarray, float]:
    residual = _sigmoid(X @ w + b) - y
    grad_w = X.T @ residual / len(y) + lam * w
    grad_b = float(residual.mean())
    return grad_w, grad_b


def train_logreg(
    data: Sequence[CombinedVector],
    lam: float = 1e-4,
    epochs: int = 100,
    lr0: float = 1.0,
    seed: int = 0,
    n_sparse: int | None = None,
    n_dense: int | None = None,
    vectorizer_fingerprint: str = "",
) -> TrainedModel:
    spec = ModelSpec(
        kind="logreg", hyperparameters={"lam": lam, "epochs": epochs, "lr0": lr0}, seed=seed
    )
    if n_sparse is None or n_dense is None:
        inferred_sparse, inferred_dense = infer_dims(data)
        n_sparse = inferred_sparse if n_sparse is None else n_sparse
        n_dense = inferred_dense if n_dense is None else n_dense
    # single-class input is allowed: the bias alone carries the decision
    X, y = stack(data, n_sparse, n_dense)
    n, d = X.shape
    rng = np.random.default_rng(seed)

    w = np.zeros(d, dtype=np.float64)
    b = 0.0
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            eta = lr0 / (1.0 + lam * lr0 * t)
            x = X[i]
            residual = float(_sigmoid(float(x @ w) + b)) - float(y[i])
            w -= eta * (residual * x + lam * w)
            b -= eta * residual
            t += 1
    return TrainedModel(
        spec=spec,
        n_sparse=n_sparse,
        n_dense=n_dense,
        params={"weights": w, "bias": b},
        vectorizer_fingerprint=vectorizer_fingerprint,
    )


def train_linear_svm(
    data: Sequence[CombinedVector],
    C: float = 1.0,
    epochs: int = 100,
    seed: int = 0,
    n_sparse: int | None = None,
    n_dense: int | None = None,
    vectorizer_fingerprint: str = "",
) -> TrainedModel:
    spec = ModelSpec(kind="linear_svm", hyperparameters={"C": C, "epochs": epochs}, seed=seed)
    if n_sparse is None or n_dense is None:
        inferred_sparse, inferred_dense = infer_dims(data)
        n_sparse = inferred_sparse if n_sparse is None else n_sparse
        n_dense = inferred_dense if n_dense is None else n_dense
    X, y01 = stack(data, n_sparse, n_dense)
    if len(data) > 1:
        require_both_classes(y01, "linear_svm")
    y = np.where(y01 == 1, 1.0, -1.0)
    n, d = X.shape
    lam = 1.0 / (C * n)
    rng = np.random.default_rng(seed)

    augmented = np.hstack([X, np.ones((n, 1))])
    w = np.zeros(d + 1, dtype=np.float64)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = y[i] * float(augmented[i] @ w)
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * y[i] * augmented[i]
    return TrainedModel(
        spec=spec,
        n_sparse=n_sparse,
        n_dense=n_dense,
        params={"weights": w[:-1], "bias": float(w[-1])},
        vectorizer_fingerprint=vectorizer_fingerprint,
    )


def linear_margin(model: TrainedModel, x: np.ndarray) -> float:
    return float(model.params["weights"] @ x + model.params["bias"])
