"""Text cleaning and binarized feature extraction.

Each tweet becomes a :class:`FeatureRow`: a cleaned, concatenated text
field (tweet text + hashtags + mentions + user name + location) plus
0/1 metadata features. Count-like metadata is binarized: presence for
URL/hashtag/mention lists, a fixed word-count cutoff (short posts skew
fake, so count <= threshold maps to 0), and training-median cutoffs
for account age and retweet count so the thresholds are data-driven
but fitted on training folds only.
"""

from __future__ import annotations

import csv
import io
import re
import statistics
import unicodedata
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import TweetRecord
from .errors import DataError
from .stopwords import STOPWORDS

DEFAULT_WORD_COUNT_THRESHOLD = 10

_URL_RE = re.compile(r"https?://\S*")
_NON_TEXT_RE = re.compile(r"[^\w\s]|_")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True, slots=True)
class Thresholds:
    """Binarization cutoffs; fitted on a training split, reused on test."""

    word_count_threshold: int = DEFAULT_WORD_COUNT_THRESHOLD
    account_age_threshold_days: float = 0.0
    retweet_count_threshold: float = 0.0
    fitted_on: str = ""

    def __post_init__(self) -> None:
        if self.word_count_threshold <= 0:
            raise DataError("word_count_threshold must be positive")
        for value in (self.account_age_threshold_days, self.retweet_count_threshold):
            if value != value or value in (float("inf"), float("-inf")):
                raise DataError("thresholds must be finite")


@dataclass(slots=True)
class FeatureRow:
    """Cleaned derived text plus binarized metadata features."""

    derived_text: str
    is_user_verified: int
    word_count_bin: int
    tweet_url_count_bin: int
    hashtag_count_bin: int
    user_mention_count_bin: int
    retweet_count_bin: int
    account_age_bin: int
    label: int


# order matters: this is the dense feature layout used downstream
NUMERIC_FIELDS = (
    "is_user_verified",
    "word_count_bin",
    "tweet_url_count_bin",
    "hashtag_count_bin",
    "user_mention_count_bin",
    "retweet_count_bin",
    "account_age_bin",
)


def numeric_fields(include_retweet: bool = True) -> tuple[str, ...]:
    if include_retweet:
        return NUMERIC_FIELDS
    return tuple(f for f in NUMERIC_FIELDS if f != "retweet_count_bin")


def numeric_vector(row: FeatureRow, field_names: Sequence[str] = NUMERIC_FIELDS) -> list[float]:
    return [float(getattr(row, name)) for name in field_names]


def assemble_text(record: TweetRecord) -> str:
    """Concatenate text, hashtags, mentions, user name, and location, in
    that fixed order, single-space separated, skipping empty parts."""
    parts: list[str] = []
    if record.text:
        parts.append(record.text)
    parts.extend(h for h in record.hashtags if h)
    parts.extend(m for m in record.user_mentions if m)
    if record.user_name:
        parts.append(record.user_name)
    if record.user_location:
        parts.append(record.user_location)
    return " ".join(parts)


def clean_text(raw: str) -> str:
    """Normalize (NFC), lowercase, strip URLs, strip punctuation, collapse
    whitespace, and drop stop-words. Idempotent by construction."""
    s = unicodedata.normalize("NFC", raw).lower()
    s = _URL_RE.sub(" ", s)
    s = _NON_TEXT_RE.sub("", s)
    tokens = [t for t in _WS_RE.split(s) if t and t not in STOPWORDS]
    return " ".join(tokens)


def derived_text(record: TweetRecord) -> str:
    return clean_text(assemble_text(record))


def fit_thresholds(
    train: Sequence[TweetRecord],
    word_count_threshold: int = DEFAULT_WORD_COUNT_THRESHOLD,
    fitted_on: str = "",
) -> Thresholds:
    """Fit data-driven cutoffs on a training split.

    The word-count cutoff is a fixed config value; account age and
    retweet count use the training median (even count: mean of the two
    middle values).
    """
    if not train:
        raise DataError("cannot fit thresholds on an empty training set")
    ages = sorted(r.account_age_days() for r in train)
    retweets = sorted(float(r.retweet_count) for r in train)
    return Thresholds(
        word_count_threshold=word_count_threshold,
        account_age_threshold_days=statistics.median(ages),
        retweet_count_threshold=statistics.median(retweets),
        fitted_on=fitted_on,
    )


def extract_features(record: TweetRecord, thresholds: Thresholds) -> FeatureRow:
    """Binarize one record against fitted thresholds.

    Word count at exactly the threshold maps to 0 (the cutoff assigns
    "more than threshold" to 1). URL/hashtag/mention features fire on
    presence.
    """
    text = derived_text(record)
    word_count = len(text.split()) if text else 0
    return FeatureRow(
        derived_text=text,
        is_user_verified=1 if record.user_verified else 0,
        word_count_bin=1 if word_count > thresholds.word_count_threshold else 0,
        tweet_url_count_bin=1 if record.urls else 0,
        hashtag_count_bin=1 if record.hashtags else 0,
        user_mention_count_bin=1 if record.user_mentions else 0,
        retweet_count_bin=1 if record.retweet_count > thresholds.retweet_count_threshold else 0,
        account_age_bin=1 if record.account_age_days() > thresholds.account_age_threshold_days else 0,
        label=record.label,
    )


def extract_all(records: Iterable[TweetRecord], thresholds: Thresholds) -> list[FeatureRow]:
    return [extract_features(r, thresholds) for r in records]


# --- CSV artifact (for inspection; not a pipeline dependency) ----------------

_CSV_HEADER = [f.name for f in fields(FeatureRow)]


def rows_to_csv(rows: Iterable[FeatureRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for row in rows:
        writer.writerow(
            [row.derived_text]
            + [getattr(row, name) for name in _CSV_HEADER[1:-1]]
            + [row.label]
        )
    return buf.getvalue()


def write_rows_csv(rows: Iterable[FeatureRow], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8")


def read_rows_csv(path: str | Path) -> list[FeatureRow]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"feature table not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CSV_HEADER:
            raise DataError(f"feature table header mismatch in {path}")
        rows = []
        for raw in reader:
            if not raw:
                continue
            rows.append(
                FeatureRow(
                    derived_text=raw[0],
                    **{name: int(float(v)) for name, v in zip(_CSV_HEADER[1:], raw[1:])},
                )
            )
    return rows
