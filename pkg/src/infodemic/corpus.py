"""Labeled tweet corpus: index loading, ingestion, and distribution accounting.

The corpus arrives as a label index (tweet IDs with fake/real labels,
since platform policy forbids redistributing tweet text) that is
hydrated elsewhere into full :class:`TweetRecord` values. This module
owns the record types, the CSV index reader, duplicate/missing-data
cleansing, and the fake-vs-real distribution summary.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

LABEL_FAKE = 1
LABEL_REAL = 0

CLAIM_KINDS = ("claim", "news_article")
POST_KINDS = ("tweet", "reply")

INDEX_HEADER = ["id", "label", "claim_kind", "post_kind"]

_LABEL_ALIASES = {"0": 0, "1": 1, "real": 0, "fake": 1}


@dataclass(frozen=True, slots=True)
class IndexEntry:
    tweet_id: str
    label: int
    claim_kind: str
    post_kind: str


@dataclass(slots=True)
class LabelIndex:
    """Parsed label index: one entry per well-formed data row.

    Malformed rows are kept in ``rejects`` as (line_number, reason) so
    nothing is silently dropped; duplicate IDs are permitted here and
    flagged in ``duplicate_ids`` (ingestion collapses them later).
    """

    entries: list[IndexEntry] = field(default_factory=list)
    rejects: list[tuple[int, str]] = field(default_factory=list)
    duplicate_ids: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(slots=True)
class TweetRecord:
    """One hydrated tweet with its content, entities, and author metadata."""

    tweet_id: str
    text: str
    hashtags: list[str]
    user_mentions: list[str]
    urls: list[str]
    retweet_count: int
    user_name: str
    user_location: str
    user_verified: bool
    account_created_at: datetime
    collected_at: datetime
    label: int
    claim_kind: str = "claim"
    post_kind: str = "tweet"

    def account_age_days(self) -> float:
        return (self.collected_at - self.account_created_at).total_seconds() / 86400.0


@dataclass(slots=True)
class Dataset:
    """Ordered, deduplicated record collection with provenance."""

    records: list[TweetRecord]
    provenance: str = ""
    seed_log: list[tuple[str, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> list[int]:
        return [r.label for r in self.records]


@dataclass(slots=True)
class IngestResult:
    dataset: Dataset
    duplicate_ids: list[str]
    missing_ids: list[str]


@dataclass(slots=True)
class DistributionTable:
    """Fake/real x claim/news x tweet/reply cross-classification."""

    counts: dict[tuple[int, str, str], int]
    total: int
    imbalance_ratio: tuple[int, int]  # (fake %, real %), integer percent

    def label_total(self, label: int) -> int:
        return sum(n for (lbl, _, _), n in self.counts.items() if lbl == label)

    def post_kind_total(self, post_kind: str) -> int:
        return sum(n for (_, _, pk), n in self.counts.items() if pk == post_kind)


def load_label_index(path: str | Path) -> LabelIndex:
    """Read a label index CSV (header ``id,label,claim_kind,post_kind``).

    Labels accept ``0|1|real|fake``. Rows that cannot be interpreted are
    collected into the rejects list with a reason rather than raised,
    so one bad row never aborts a multi-hour hydration run.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"label index not found: {path}")
    index = LabelIndex()
    seen: set[str] = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"label index is empty (no header): {path}") from None
        if [h.strip().lower() for h in header] != INDEX_HEADER:
            raise DataError(
                f"label index header must be {','.join(INDEX_HEADER)}, got: {','.join(header)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                index.rejects.append((line_no, f"expected 4 columns, got {len(row)}"))
                continue
            tweet_id, label_raw, claim_kind, post_kind = (cell.strip() for cell in row)
            if not tweet_id or not tweet_id.isdigit():
                index.rejects.append((line_no, f"tweet id is not a decimal string: {tweet_id!r}"))
                continue
            label = _LABEL_ALIASES.get(label_raw.lower())
            if label is None:
                index.rejects.append((line_no, f"label must be 0/1/real/fake, got {label_raw!r}"))
                continue
            if claim_kind not in CLAIM_KINDS:
                index.rejects.append((line_no, f"unknown claim_kind {claim_kind!r}"))
                continue
            if post_kind not in POST_KINDS:
                index.rejects.append((line_no, f"unknown post_kind {post_kind!r}"))
                continue
            if tweet_id in seen:
                index.duplicate_ids.append(tweet_id)
            seen.add(tweet_id)
            index.entries.append(IndexEntry(tweet_id, label, claim_kind, post_kind))
    return index


def ingest(records: Iterable[TweetRecord], provenance: str = "ingest") -> IngestResult:
    """Cleanse records: collapse duplicate IDs (keep first occurrence, file
    order) and drop records with no textual content in any text-bearing
    field. Drop counts are reported, never silent."""
    kept: list[TweetRecord] = []
    seen: set[str] = set()
    duplicates: list[str] = []
    missing: list[str] = []
    for rec in records:
        if rec.tweet_id in seen:
            duplicates.append(rec.tweet_id)
            continue
        seen.add(rec.tweet_id)
        if not rec.text and not rec.hashtags and not rec.user_mentions:
            missing.append(rec.tweet_id)
            continue
        kept.append(rec)
    return IngestResult(
        dataset=Dataset(records=kept, provenance=provenance),
        duplicate_ids=duplicates,
        missing_ids=missing,
    )


def summarize(dataset: Dataset) -> DistributionTable:
    """Cross-classify the dataset by label, claim kind, and post kind."""
    return _distribution(
        (r.label, r.claim_kind, r.post_kind) for r in dataset.records
    )


def summarize_index(index: LabelIndex) -> DistributionTable:
    """Same accounting as :func:`summarize`, over a pre-hydration index."""
    return _distribution((e.label, e.claim_kind, e.post_kind) for e in index.entries)


def _distribution(cells: Iterable[tuple[int, str, str]]) -> DistributionTable:
    counts: dict[tuple[int, str, str], int] = {}
    for label in (LABEL_FAKE, LABEL_REAL):
        for claim_kind in CLAIM_KINDS:
            for post_kind in POST_KINDS:
                counts[(label, claim_kind, post_kind)] = 0
    total = 0
    for cell in cells:
        counts[cell] = counts.get(cell, 0) + 1
        total += 1
    if total == 0:
        ratio = (0, 0)
    else:
        fake = sum(n for (lbl, _, _), n in counts.items() if lbl == LABEL_FAKE)
        ratio = (round(100.0 * fake / total), round(100.0 * (total - fake) / total))
    return DistributionTable(counts=counts, total=total, imbalance_ratio=ratio)


# --- record (de)serialization: newline-delimited JSON fixtures ---------------

_ISO = "%Y-%m-%dT%H:%M:%S%z"


def _dt_to_str(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).strftime(_ISO)


def _dt_from_str(s: str) -> datetime:
    value = s.replace("Z", "+0000").replace("+00:00", "+0000")
    return datetime.strptime(value, _ISO).astimezone(timezone.utc)


def record_to_dict(rec: TweetRecord) -> dict:
    return {
        "tweet_id": rec.tweet_id,
        "text": rec.text,
        "hashtags": list(rec.hashtags),
        "user_mentions": list(rec.user_mentions),
        "urls": list(rec.urls),
        "retweet_count": rec.retweet_count,
        "user_name": rec.user_name,
        "user_location": rec.user_location,
        "user_verified": rec.user_verified,
        "account_created_at": _dt_to_str(rec.account_created_at),
        "collected_at": _dt_to_str(rec.collected_at),
        "label": rec.label,
        "claim_kind": rec.claim_kind,
        "post_kind": rec.post_kind,
    }


def record_from_dict(obj: dict) -> TweetRecord:
    try:
        rec = TweetRecord(
            tweet_id=str(obj["tweet_id"]),
            text=str(obj["text"]),
            hashtags=[str(h) for h in obj["hashtags"]],
            user_mentions=[str(m) for m in obj["user_mentions"]],
            urls=[str(u) for u in obj["urls"]],
            retweet_count=int(obj["retweet_count"]),
            user_name=str(obj["user_name"]),
            user_location=str(obj.get("user_location", "")),
            user_verified=bool(obj["user_verified"]),
            account_created_at=_dt_from_str(obj["account_created_at"]),
            collected_at=_dt_from_str(obj["collected_at"]),
            label=int(obj["label"]),
            claim_kind=str(obj.get("claim_kind", "claim")),
            post_kind=str(obj.get("post_kind", "tweet")),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DataError(f"malformed tweet record: {exc}") from exc
    if rec.retweet_count < 0:
        raise DataError(f"tweet {rec.tweet_id}: negative retweet_count")
    if rec.label not in (LABEL_FAKE, LABEL_REAL):
        raise DataError(f"tweet {rec.tweet_id}: label must be 0 or 1")
    if rec.account_created_at > rec.collected_at:
        raise DataError(f"tweet {rec.tweet_id}: account created after collection")
    return rec


def write_records(records: Sequence[TweetRecord], path: str | Path) -> None:
    """Write records as newline-delimited JSON (the fixture format)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(record_to_dict(rec), sort_keys=True))
            fh.write("\n")


def read_records(path: str | Path) -> list[TweetRecord]:
    """Read a newline-delimited JSON fixture of tweet records."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"record file not found: {path}")
    records = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
            records.append(record_from_dict(obj))
    return records
