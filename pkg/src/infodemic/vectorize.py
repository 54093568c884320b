"""Capped-vocabulary TF-IDF plus standardized numeric features.

The vocabulary keeps the top-``cap`` tokens (default 5,000) by total
corpus term frequency, ties broken lexicographically. Weights use the
smoothed inverse document frequency ln((1+N)/(1+df)) + 1 (never zero,
never divides by zero) with raw in-document counts, L2-normalized per
document. Numeric features are standardized against training mean and
standard deviation; a zero-variance feature maps to 0.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from math import log, sqrt
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .preprocess import FeatureRow, NUMERIC_FIELDS, numeric_vector

DEFAULT_TOKEN_CAP = 5000

SERIAL_SCHEMA = "infodemic.vectorizer/1"


@dataclass(slots=True)
class Vocabulary:
    """Ordered term table; column ids follow descending corpus frequency."""

    terms: list[tuple[str, int, int]]  # (term, corpus_term_frequency, document_frequency)
    index: dict[str, int]
    cap: int

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(slots=True)
class Vectorizer:
    vocabulary: Vocabulary
    idf: np.ndarray
    numeric_field_names: tuple[str, ...]
    numeric_mean: np.ndarray
    numeric_std: np.ndarray
    n_documents: int
    fitted: bool = True

    @property
    def n_sparse(self) -> int:
        return len(self.vocabulary)

    @property
    def n_dense(self) -> int:
        return len(self.numeric_field_names)


@dataclass(slots=True)
class CombinedVector:
    """L2-normalized sparse text weights plus a dense numeric part."""

    sparse: list[tuple[int, float]]  # (column id, weight), sorted by column
    dense: np.ndarray
    label: int


def fit(
    train_rows: Sequence[FeatureRow],
    cap: int = DEFAULT_TOKEN_CAP,
    numeric_field_names: Sequence[str] = NUMERIC_FIELDS,
) -> Vectorizer:
    """Fit vocabulary, idf weights, and numeric statistics on training rows."""
    if not train_rows:
        raise DataError("cannot fit a vectorizer on an empty corpus")
    if cap < 1:
        raise DataError("token cap must be at least 1")

    term_freq: Counter[str] = Counter()
    doc_freq: Counter[str] = Counter()
    for row in train_rows:
        tokens = row.derived_text.split()
        term_freq.update(tokens)
        doc_freq.update(set(tokens))

    ranked = sorted(term_freq.items(), key=lambda kv: (-kv[1], kv[0]))[:cap]
    terms = [(term, tf, doc_freq[term]) for term, tf in ranked]
    index = {term: col for col, (term, _, _) in enumerate(terms)}

    n = len(train_rows)
    idf = np.array(
        [log((1.0 + n) / (1.0 + df)) + 1.0 for (_, _, df) in terms], dtype=np.float64
    )

    numeric = np.array(
        [numeric_vector(row, numeric_field_names) for row in train_rows], dtype=np.float64
    )
    return Vectorizer(
        vocabulary=Vocabulary(terms=terms, index=index, cap=cap),
        idf=idf,
        numeric_field_names=tuple(numeric_field_names),
        numeric_mean=numeric.mean(axis=0),
        numeric_std=numeric.std(axis=0),
        n_documents=n,
    )


def transform(row: FeatureRow, v: Vectorizer, standardize: bool = True) -> CombinedVector:
    """Vectorize one row. Out-of-vocabulary tokens are ignored; the sparse
    part is L2-normalized (or empty). ``standardize=False`` keeps the raw
    binary numeric features, as required by nonnegative-count models."""
    if not v.fitted:
        raise DataError("vectorizer is not fitted")
    counts: Counter[int] = Counter()
    for token in row.derived_text.split():
        col = v.vocabulary.index.get(token)
        if col is not None:
            counts[col] += 1
    weights = [(col, counts[col] * float(v.idf[col])) for col in sorted(counts)]
    norm = sqrt(sum(w * w for _, w in weights))
    if norm > 0.0:
        weights = [(col, w / norm) for col, w in weights]

    dense = np.asarray(numeric_vector(row, v.numeric_field_names), dtype=np.float64)
    if standardize:
        dense = dense - v.numeric_mean
        safe = np.where(v.numeric_std > 0.0, v.numeric_std, 1.0)
        dense = np.where(v.numeric_std > 0.0, dense / safe, 0.0)
    return CombinedVector(sparse=weights, dense=dense, label=row.label)


def transform_all(
    rows: Iterable[FeatureRow], v: Vectorizer, standardize: bool = True
) -> list[CombinedVector]:
    return [transform(row, v, standardize) for row in rows]


def to_matrix(vectors: Sequence[CombinedVector], v: Vectorizer) -> np.ndarray:
    """Densify combined vectors: sparse columns first, then numeric ones."""
    out = np.zeros((len(vectors), v.n_sparse + v.n_dense), dtype=np.float64)
    for i, vec in enumerate(vectors):
        for col, w in vec.sparse:
            out[i, col] = w
        out[i, v.n_sparse :] = vec.dense
    return out


# --- serialization ------------------------------------------------------------


def vectorizer_to_json(v: Vectorizer) -> str:
    doc = {
        "schema": SERIAL_SCHEMA,
        "cap": v.vocabulary.cap,
        "n_documents": v.n_documents,
        "terms": [[t, tf, df] for (t, tf, df) in v.vocabulary.terms],
        "idf": [float(x) for x in v.idf],
        "numeric_fields": list(v.numeric_field_names),
        "numeric_mean": [float(x) for x in v.numeric_mean],
        "numeric_std": [float(x) for x in v.numeric_std],
    }
    return json.dumps(doc, sort_keys=True)


def vectorizer_from_json(text: str) -> Vectorizer:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid vectorizer JSON: {exc}") from exc
    if doc.get("schema") != SERIAL_SCHEMA:
        raise DataError(f"unsupported vectorizer schema: {doc.get('schema')!r}")
    terms = [(str(t), int(tf), int(df)) for t, tf, df in doc["terms"]]
    return Vectorizer(
        vocabulary=Vocabulary(
            terms=terms,
            index={t: i for i, (t, _, _) in enumerate(terms)},
            cap=int(doc["cap"]),
        ),
        idf=np.asarray(doc["idf"], dtype=np.float64),
        numeric_field_names=tuple(doc["numeric_fields"]),
        numeric_mean=np.asarray(doc["numeric_mean"], dtype=np.float64),
        numeric_std=np.asarray(doc["numeric_std"], dtype=np.float64),
        n_documents=int(doc["n_documents"]),
    )


def fingerprint(v: Vectorizer) -> str:
    """Content hash binding models to the exact transform that fed them."""
    return hashlib.sha256(vectorizer_to_json(v).encode("utf-8")).hexdigest()


def export_sparse(
    vectors: Sequence[CombinedVector], path: str | Path
) -> None:
    """Audit dump: one ``row,col,value`` line per nonzero sparse entry."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for i, vec in enumerate(vectors):
            for col, w in vec.sparse:
                fh.write(f"{i},{col},{w!r}\n")
