"""Random forest of CART-style trees on bootstrap samples.

Each tree draws N samples with replacement (per-tree seed = base seed +
tree index), then recursively splits on the best of ceil(sqrt(d))
candidate features by Gini impurity decrease. Splits test value <=
threshold with thresholds at midpoints of consecutive sorted unique
values; exact ties prefer the lowest feature id, then the lowest
threshold. Leaves keep class counts; the forest predicts by majority
vote over trees with ties resolved to label 0.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..vectorize import CombinedVector
from .common import ModelSpec, TrainedModel, infer_dims, require_both_classes, stack

NO_FEATURE = -1


def gini_impurity(n0: float, n1: float) -> float:
    total = n0 + n1
    if total <= 0.0:
        return 0.0
    p0 = n0 / total
    p1 = n1 / total
    return 1.0 - (p0 * p0 + p1 * p1)


def _best_split(
    X: np.ndarray,
    y: np.ndarray,
    sample_idx: np.ndarray,
    features: np.ndarray,
    min_leaf: int,
) -> tuple[int, float, float]:
    """Best (feature, threshold, gini decrease) over candidate features;
    feature NO_FEATURE when no split improves impurity."""
    n = len(sample_idx)
    labels = y[sample_idx]
    total1 = int(labels.sum())
    parent_gini = gini_impurity(n - total1, total1)

    best_feature = NO_FEATURE
    best_threshold = 0.0
    best_decrease = 0.0
    for f in features:
        values = X[sample_idx, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        boundaries = np.flatnonzero(sv[1:] != sv[:-1])
        if len(boundaries) == 0:
            continue
        ones_prefix = np.cumsum(labels[order])
        n_left = boundaries + 1
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        ones_left = ones_prefix[boundaries]
        ones_right = total1 - ones_left
        p1_l = ones_left / n_left
        p1_r = ones_right / n_right
        gini_l = 1.0 - (p1_l * p1_l + (1.0 - p1_l) * (1.0 - p1_l))
        gini_r = 1.0 - (p1_r * p1_r + (1.0 - p1_r) * (1.0 - p1_r))
        decrease = parent_gini - (n_left * gini_l + n_right * gini_r) / n
        decrease[~valid] = -1.0
        pos = int(np.argmax(decrease))  # first max: lowest threshold wins ties
        if decrease[pos] > best_decrease:
            best_decrease = float(decrease[pos])
            best_feature = int(f)
            best_threshold = float((sv[pos] + sv[pos + 1]) / 2.0)
    return best_feature, best_threshold, best_decrease


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    bootstrap_idx: np.ndarray,
    rng: np.random.Generator,
    min_leaf: int,
) -> dict[str, np.ndarray]:
    """Grow one tree (preorder, explicit stack) into parallel node arrays."""
    d = X.shape[1]
    m = math.ceil(math.sqrt(d))

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    counts: list[tuple[int, int]] = []

    def new_node(sample_idx: np.ndarray) -> int:
        node = len(feature)
        n1 = int(y[sample_idx].sum())
        feature.append(NO_FEATURE)
        threshold.append(0.0)
        left.append(NO_FEATURE)
        right.append(NO_FEATURE)
        counts.append((len(sample_idx) - n1, n1))
        return node

    root = new_node(bootstrap_idx)
    stack_ = [(root, bootstrap_idx)]
    while stack_:
        node, sample_idx = stack_.pop()
        n0, n1 = counts[node]
        if n0 == 0 or n1 == 0 or len(sample_idx) < 2 * min_leaf:
            continue
        candidates = np.sort(rng.choice(d, size=min(m, d), replace=False))
        f, thr, decrease = _best_split(X, y, sample_idx, candidates, min_leaf)
        if f == NO_FEATURE or decrease <= 0.0:
            continue
        go_left = X[sample_idx, f] <= thr
        feature[node] = f
        threshold[node] = thr
        left_idx = sample_idx[go_left]
        right_idx = sample_idx[~go_left]
        left[node] = new_node(left_idx)
        right[node] = new_node(right_idx)
        # push right first so the left subtree is numbered (and grown) first
        stack_.append((right[node], right_idx))
        stack_.append((left[node], left_idx))
    return {
        "feature": np.asarray(feature, dtype=np.int32),
        "threshold": np.asarray(threshold, dtype=np.float64),
        "left": np.asarray(left, dtype=np.int32),
        "right": np.asarray(right, dtype=np.int32),
        "counts": np.asarray(counts, dtype=np.int64),
    }


def train_random_forest(
    data: Sequence[CombinedVector],
    n_trees: int = 100,
    max_features: str = "sqrt",
    min_leaf: int = 1,
    seed: int = 0,
    n_sparse: int | None = None,
    n_dense: int | None = None,
    vectorizer_fingerprint: str = "",
) -> TrainedModel:
    spec = ModelSpec(
        kind="random_forest",
        hyperparameters={"n_trees": n_trees, "max_features": max_features, "min_leaf": min_leaf},
        seed=seed,
    )
    if n_sparse is None or n_dense is None:
        inferred_sparse, inferred_dense = infer_dims(data)
        n_sparse = inferred_sparse if n_sparse is None else n_sparse
        n_dense = inferred_dense if n_dense is None else n_dense
    X, y = stack(data, n_sparse, n_dense)
    require_both_classes(y, "random_forest")
    n = len(y)

    trees = []
    for tree_index in range(n_trees):
        rng = np.random.default_rng(seed + tree_index)
        bootstrap_idx = rng.integers(0, n, size=n)
        trees.append(_grow_tree(X, y, bootstrap_idx, rng, min_leaf))
    return TrainedModel(
        spec=spec,
        n_sparse=n_sparse,
        n_dense=n_dense,
        params={"trees": trees},
        vectorizer_fingerprint=vectorizer_fingerprint,
    )


def _tree_vote(tree: dict[str, np.ndarray], x: np.ndarray) -> int:
    node = 0
    feature = tree["feature"]
    while feature[node] != NO_FEATURE:
        if x[feature[node]] <= tree["threshold"][node]:
            node = tree["left"][node]
        else:
            node = tree["right"][node]
    n0, n1 = tree["counts"][node]
    return 1 if n1 > n0 else 0


def forest_vote_fraction(model: TrainedModel, x: np.ndarray) -> float:
    trees = model.params["trees"]
    votes = sum(_tree_vote(tree, x) for tree in trees)
    return votes / len(trees)
