"""Class rebalancing by informed under-sampling.

One-sided selection keeps every minority point, grows a 1-NN-consistent
subset of the majority class, then drops majority points that sit in
Tomek links (mutual nearest neighbors of opposite class: borderline or
noise). OSS has no ratio knob, so a separate seeded subsampling stage
afterwards enforces a target minority:majority ratio (default 30:70).
Random under/over-sampling baselines are provided for comparison.

OSS needs a metric space; points are built from the binarized feature
fields plus a fixed-dimension hashed bag-of-words projection of the
cleaned text (1-NN over a full high-dimensional TF-IDF matrix would be
quadratic in corpus size for no benefit here).
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .preprocess import FeatureRow, numeric_fields, numeric_vector

MINORITY = "minority"
MAJORITY = "majority"

DEFAULT_TEXT_DIM = 64

METHODS = ("oss", "random_under", "random_over", "none")
DISTANCES = ("euclidean", "cosine")


@dataclass(slots=True)
class BalanceConfig:
    method: str = "oss"
    target_minority_fraction: float = 0.30
    distance: str = "euclidean"
    seed: int = 0
    text_dim: int = DEFAULT_TEXT_DIM

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise DataError(f"balance method must be one of {METHODS}, got {self.method!r}")
        if not 0.0 < self.target_minority_fraction < 1.0:
            raise DataError("target_minority_fraction must be in (0, 1)")
        if self.distance not in DISTANCES:
            raise DataError(f"distance must be one of {DISTANCES}, got {self.distance!r}")


@dataclass(slots=True)
class IndexedPoint:
    row_index: int
    vector: np.ndarray
    cls: str  # MINORITY or MAJORITY


def hashed_text_vector(text: str, dim: int) -> np.ndarray:
    """Project whitespace tokens into ``dim`` buckets by CRC32 (stable
    across processes, unlike the builtin hash)."""
    v = np.zeros(dim, dtype=np.float64)
    for token in text.split():
        v[zlib.crc32(token.encode("utf-8")) % dim] += 1.0
    return v


def minority_label(labels: Sequence[int]) -> int:
    """The scarcer label; ties go to 1 (the class of interest)."""
    ones = sum(1 for y in labels if y == 1)
    zeros = len(labels) - ones
    return 1 if ones <= zeros else 0


def build_points(
    rows: Sequence[FeatureRow],
    text_dim: int = DEFAULT_TEXT_DIM,
    include_retweet: bool = True,
) -> list[IndexedPoint]:
    """Embed feature rows into the OSS metric space, in dataset order."""
    if not rows:
        return []
    minority = minority_label([r.label for r in rows])
    names = numeric_fields(include_retweet)
    points = []
    for i, row in enumerate(rows):
        parts = [np.asarray(numeric_vector(row, names), dtype=np.float64)]
        if text_dim > 0:
            parts.append(hashed_text_vector(row.derived_text, text_dim))
        points.append(
            IndexedPoint(
                row_index=i,
                vector=np.concatenate(parts),
                cls=MINORITY if row.label == minority else MAJORITY,
            )
        )
    return points


def _distance_to_many(query: np.ndarray, others: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        diff = others - query
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))
    # cosine: distance 1 - similarity; zero-norm vectors get similarity 0
    q_norm = math.sqrt(float(query @ query))
    o_norms = np.sqrt(np.einsum("ij,ij->i", others, others))
    sims = np.zeros(len(others), dtype=np.float64)
    if q_norm > 0.0:
        nonzero = o_norms > 0.0
        sims[nonzero] = (others[nonzero] @ query) / (o_norms[nonzero] * q_norm)
    return 1.0 - sims


def _nearest(
    query: np.ndarray,
    candidates: np.ndarray,
    candidate_rows: np.ndarray,
    metric: str,
) -> int:
    """Position (into candidates) of the nearest point; distance ties break
    toward the lowest row index."""
    dists = _distance_to_many(query, candidates, metric)
    best = np.flatnonzero(dists == dists.min())
    if len(best) == 1:
        return int(best[0])
    return int(best[np.argmin(candidate_rows[best])])


def one_sided_selection(points: Sequence[IndexedPoint], cfg: BalanceConfig) -> list[int]:
    """Run OSS; returns kept row indices in dataset order, minority intact.

    Stage 1 grows the consistent subset C: all minority points plus the
    first majority point, then every remaining majority point (scanned
    in dataset order) that the current C misclassifies by 1-NN. Stage 2
    removes majority members of Tomek links within C.
    """
    if not points:
        raise DataError("one_sided_selection requires at least one point of each class")
    dim = points[0].vector.shape[0]
    if dim == 0:
        raise DataError("points must have at least one vector component")
    classes = {p.cls for p in points}
    if classes != {MINORITY, MAJORITY}:
        raise DataError("one_sided_selection requires both classes present")

    ordered = sorted(points, key=lambda p: p.row_index)
    vectors = np.stack([p.vector for p in ordered])
    rows = np.array([p.row_index for p in ordered], dtype=np.int64)
    is_minority = np.array([p.cls == MINORITY for p in ordered], dtype=bool)

    # consistent subset: positions into `points`
    in_c = list(np.flatnonzero(is_minority))
    first_majority = int(np.flatnonzero(~is_minority)[0])
    in_c.append(first_majority)
    for pos in np.flatnonzero(~is_minority):
        pos = int(pos)
        if pos == first_majority:
            continue
        c_arr = np.fromiter(in_c, dtype=np.int64)
        nn = _nearest(vectors[pos], vectors[c_arr], rows[c_arr], cfg.distance)
        if is_minority[c_arr[nn]]:
            in_c.append(pos)

    # Tomek-link cleaning within C
    c_arr = np.fromiter(sorted(in_c), dtype=np.int64)
    nn_of = {}
    for i, pos in enumerate(c_arr):
        others = np.delete(c_arr, i)
        nn = _nearest(vectors[pos], vectors[others], rows[others], cfg.distance)
        nn_of[int(pos)] = int(others[nn])
    dropped = {
        pos
        for pos in map(int, c_arr)
        if not is_minority[pos]
        and is_minority[nn_of[pos]]
        and nn_of[nn_of[pos]] == pos
    }

    kept = [int(rows[pos]) for pos in map(int, c_arr) if pos not in dropped]
    return sorted(kept)


def enforce_ratio(
    labels: Sequence[int], cfg: BalanceConfig, minority: int | None = None
) -> list[int]:
    """Subsample the majority down to floor((1-f)/f * minority), seeded and
    without replacement; the minority class is never reduced. A majority
    already at or below the cap passes through untouched. ``minority``
    pins the minority role explicitly (the pipeline anchors it to the
    pre-consolidation counts); by default it is inferred from counts."""
    if minority is None:
        minority = minority_label(labels)
    minority_idx = [i for i, y in enumerate(labels) if y == minority]
    majority_idx = [i for i, y in enumerate(labels) if y != minority]
    if not minority_idx or not majority_idx:
        raise DataError("enforce_ratio requires both classes present")
    f = cfg.target_minority_fraction
    cap = math.floor((1.0 - f) / f * len(minority_idx))
    if len(majority_idx) <= cap:
        return list(range(len(labels)))
    rng = np.random.default_rng(cfg.seed)
    chosen = rng.choice(len(majority_idx), size=cap, replace=False)
    kept = set(minority_idx)
    kept.update(majority_idx[i] for i in chosen)
    return sorted(kept)


def random_undersample(labels: Sequence[int], cfg: BalanceConfig) -> list[int]:
    """Uniformly reduce the majority (without replacement) to the minority
    count; deterministic given the seed."""
    minority = minority_label(labels)
    minority_idx = [i for i, y in enumerate(labels) if y == minority]
    majority_idx = [i for i, y in enumerate(labels) if y != minority]
    if not minority_idx or not majority_idx:
        raise DataError("random_undersample requires both classes present")
    rng = np.random.default_rng(cfg.seed)
    chosen = rng.choice(len(majority_idx), size=len(minority_idx), replace=False)
    kept = set(minority_idx)
    kept.update(majority_idx[i] for i in chosen)
    return sorted(kept)


def random_oversample(labels: Sequence[int], cfg: BalanceConfig) -> list[int]:
    """Duplicate minority rows (with replacement) up to the majority count;
    every original row stays, duplicates are appended. Returns a row
    multiset."""
    minority = minority_label(labels)
    minority_idx = [i for i, y in enumerate(labels) if y == minority]
    majority_idx = [i for i, y in enumerate(labels) if y != minority]
    if not minority_idx or not majority_idx:
        raise DataError("random_oversample requires both classes present")
    extra = len(majority_idx) - len(minority_idx)
    result = list(range(len(labels)))
    if extra <= 0:
        return result
    rng = np.random.default_rng(cfg.seed)
    draws = rng.integers(0, len(minority_idx), size=extra)
    result.extend(minority_idx[i] for i in draws)
    return result


def rebalance(
    rows: Sequence[FeatureRow],
    cfg: BalanceConfig,
    include_retweet: bool = True,
) -> list[int]:
    """Apply the configured method; OSS is followed by ratio enforcement.

    Returns kept row indices (a multiset for oversampling).
    """
    labels = [r.label for r in rows]
    if cfg.method == "none":
        return list(range(len(rows)))
    if cfg.method == "random_under":
        return random_undersample(labels, cfg)
    if cfg.method == "random_over":
        return random_oversample(labels, cfg)
    points = build_points(rows, text_dim=cfg.text_dim, include_retweet=include_retweet)
    kept = one_sided_selection(points, cfg)
    kept_labels = [labels[i] for i in kept]
    # minority role is fixed by the pre-consolidation counts, so heavy OSS
    # pruning of the majority can never flip which class gets subsampled
    sub = enforce_ratio(kept_labels, cfg, minority=minority_label(labels))
    return [kept[i] for i in sub]
