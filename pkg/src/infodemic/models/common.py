"""Shared plumbing for the classifier implementations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DataError
from ..vectorize import CombinedVector

KINDS = ("mnb", "logreg", "linear_svm", "random_forest")

# kinds whose inputs must stay nonnegative (raw counts, unstandardized bins)
RAW_FEATURE_KINDS = frozenset({"mnb"})

DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "mnb": {"alpha": 1.0},
    "logreg": {"lam": 1e-4, "epochs": 100, "lr0": 1.0},
    "linear_svm": {"C": 1.0, "epochs": 100},
    "random_forest": {"n_trees": 100, "max_features": "sqrt", "min_leaf": 1},
}


@dataclass(slots=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DataError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        defaults = DEFAULT_HYPERPARAMETERS[self.kind]
        unknown = set(self.hyperparameters) - set(defaults)
        if unknown:
            raise DataError(f"{self.kind}: unknown hyperparameters {sorted(unknown)}")
        merged = dict(defaults)
        merged.update(self.hyperparameters)
        self.hyperparameters = merged
        _validate(self.kind, merged)


def _validate(kind: str, hp: dict) -> None:
    if kind == "mnb" and hp["alpha"] <= 0:
        raise DataError("mnb: alpha must be positive")
    if kind == "logreg" and (hp["lam"] < 0 or hp["epochs"] < 1 or hp["lr0"] <= 0):
        raise DataError("logreg: need lam >= 0, epochs >= 1, lr0 > 0")
    if kind == "linear_svm" and (hp["C"] <= 0 or hp["epochs"] < 1):
        raise DataError("linear_svm: need C > 0, epochs >= 1")
    if kind == "random_forest":
        if hp["n_trees"] < 1:
            raise DataError("random_forest: n_trees must be at least 1")
        if hp["min_leaf"] < 1:
            raise DataError("random_forest: min_leaf must be at least 1")
        if hp["max_features"] != "sqrt":
            raise DataError("random_forest: only max_features='sqrt' is supported")


@dataclass(slots=True)
class TrainedModel:
    """Learned parameters bound to the vectorizer that produced the inputs."""

    spec: ModelSpec
    n_sparse: int
    n_dense: int
    params: dict
    vectorizer_fingerprint: str = ""

    @property
    def n_features(self) -> int:
        return self.n_sparse + self.n_dense


def infer_dims(data: Sequence[CombinedVector]) -> tuple[int, int]:
    n_sparse = 0
    n_dense = 0
    for vec in data:
        if vec.sparse:
            n_sparse = max(n_sparse, vec.sparse[-1][0] + 1)
        n_dense = max(n_dense, len(vec.dense))
    return n_sparse, n_dense


def stack(
    data: Sequence[CombinedVector],
    n_sparse: int | None = None,
    n_dense: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Densify combined vectors into (X, y)."""
    if not data:
        raise DataError("training data is empty")
    inferred_sparse, inferred_dense = infer_dims(data)
    n_sparse = inferred_sparse if n_sparse is None else n_sparse
    n_dense = inferred_dense if n_dense is None else n_dense
    X = np.zeros((len(data), n_sparse + n_dense), dtype=np.float64)
    y = np.zeros(len(data), dtype=np.int64)
    for i, vec in enumerate(data):
        for col, w in vec.sparse:
            if col >= n_sparse:
                raise DataError(f"sparse column {col} exceeds dimension {n_sparse}")
            X[i, col] = w
        if len(vec.dense) != n_dense:
            raise DataError(f"dense length {len(vec.dense)} != expected {n_dense}")
        if n_dense:
            X[i, n_sparse:] = vec.dense
        y[i] = vec.label
    if not np.isfinite(X).all():
        raise DataError("training data contains non-finite values")
    return X, y


def require_both_classes(y: np.ndarray, kind: str) -> None:
    if len(np.unique(y)) < 2:
        raise DataError(f"{kind}: training data must contain both classes")


def densify(vec: CombinedVector, model: TrainedModel) -> np.ndarray:
    """One input row in the model's feature layout, dimension-checked."""
    if len(vec.dense) != model.n_dense:
        raise DataError(
            f"dense dimension {len(vec.dense)} does not match model ({model.n_dense})"
        )
    x = np.zeros(model.n_features, dtype=np.float64)
    for col, w in vec.sparse:
        if col >= model.n_sparse:
            raise DataError(f"sparse column {col} exceeds model dimension {model.n_sparse}")
        x[col] = w
    if model.n_dense:
        x[model.n_sparse :] = vec.dense
    return x
