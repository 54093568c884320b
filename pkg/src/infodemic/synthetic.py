"""Deterministic synthetic corpora bundled as generators.

Tweet text cannot be redistributed, so the package ships reproducible
generators instead of data files: a planted-signal benchmark corpus
(fake posts carry three marker tokens with probability 0.8 each, plus
skewed metadata, at 10:90 fake:real) used by the end-to-end tests, and
a label index reproducing the published fake/real x claim/news x
tweet/reply cell counts with synthetic IDs for accounting checks.
"""

from __future__ import annotations

import csv
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterator

import numpy as np

from .corpus import INDEX_HEADER, TweetRecord

PLANTED_TERMS = ("miraclecure", "plandemic", "bleachdose")

# cell counts: (post_kind, claim_kind, label) -> count
COAID_CELLS: dict[tuple[str, str, int], int] = {
    ("tweet", "claim", 1): 457,
    ("tweet", "news_article", 1): 9218,
    ("tweet", "claim", 0): 6342,
    ("tweet", "news_article", 0): 87324,
    ("reply", "claim", 1): 623,
    ("reply", "news_article", 1): 5721,
    ("reply", "claim", 0): 9764,
    ("reply", "news_article", 0): 64115,
}

_BACKGROUND_VOCAB = (
    "virus outbreak vaccine hospital doctor nurse mask distancing lockdown "
    "quarantine symptom fever cough test testing positive negative spread "
    "infection immune immunity health official government response update "
    "cases deaths recovered ventilator icu patient treatment trial study "
    "research scientist data report news media briefing guidance travel "
    "border school closure remote work economy relief fund support family "
    "community elderly risk protect wash hands sanitizer surface contact "
    "tracing app alert region city country global pandemic wave variant "
    "curve flatten peak measures rules advice stay home safe emergency "
    "supplies grocery shortage panic calm hope recovery reopen phase plan "
    "winter spring summer numbers chart graph percent rate increase drop "
    "warning doctor2 clinic ward oxygen antibody plasma dose jab shot arm"
).split()

_LOCATIONS = ("", "Leeds", "Sheffield", "London", "Lagos", "Austin", "Mumbai", "Toronto")
_HASHTAG_POOL = ("covid19", "coronavirus", "stayhome", "health", "pandemic", "lockdown")
_MENTION_POOL = ("who", "cdc", "nhsuk", "healthgov", "newsdesk")
_URL_POOL = (
    "https://example.org/story",
    "https://news.example.com/post",
    "https://t.example/x",
)

_COLLECTED_AT = datetime(2020, 5, 1, tzinfo=timezone.utc)


def make_synthetic_corpus(
    n: int = 2000,
    seed: int = 7,
    fake_fraction: float = 0.10,
    planted_probability: float = 0.8,
    background_noise: float = 0.01,
) -> list[TweetRecord]:
    """Planted-signal benchmark corpus, deterministic given the seed.

    Fake posts include each marker token independently with
    ``planted_probability``; real posts leak them at
    ``background_noise``. Metadata skews the published way: fake posts
    are shorter, less often verified, younger-account, more retweeted.
    """
    rng = np.random.default_rng(seed)
    n_fake = int(round(n * fake_fraction))
    labels = np.array([1] * n_fake + [0] * (n - n_fake))
    rng.shuffle(labels)

    records = []
    for i, label in enumerate(labels):
        fake = bool(label == 1)
        length = int(rng.poisson(8 if fake else 18)) + 3
        words = list(rng.choice(_BACKGROUND_VOCAB, size=length))
        p_term = planted_probability if fake else background_noise
        for term in PLANTED_TERMS:
            if rng.random() < p_term:
                words.insert(int(rng.integers(0, len(words) + 1)), term)
        text = " ".join(words)

        hashtags = list(
            rng.choice(_HASHTAG_POOL, size=int(rng.integers(0, 3)), replace=False)
        )
        mentions = list(
            rng.choice(_MENTION_POOL, size=int(rng.integers(0, 2)), replace=False)
        )
        n_urls = int(rng.random() < (0.7 if fake else 0.4)) + int(rng.random() < 0.1)
        urls = [str(rng.choice(_URL_POOL)) for _ in range(n_urls)]

        verified = bool(rng.random() < (0.05 if fake else 0.35))
        age_days = float(rng.exponential(180.0 if fake else 1200.0)) + 1.0
        retweets = int(rng.poisson(12.0 if fake else 4.0))

        records.append(
            TweetRecord(
                tweet_id=str(1_000_000_000_000 + i),
                text=text,
                hashtags=hashtags,
                user_mentions=mentions,
                urls=urls,
                retweet_count=retweets,
                user_name=f"user{i}",
                user_location=str(rng.choice(_LOCATIONS)),
                user_verified=verified,
                account_created_at=_COLLECTED_AT - timedelta(days=age_days),
                collected_at=_COLLECTED_AT,
                label=int(label),
                claim_kind="claim" if rng.random() < 0.5 else "news_article",
                post_kind="tweet" if rng.random() < 0.7 else "reply",
            )
        )
    return records


def coaid_index_rows() -> Iterator[tuple[str, str, str, str]]:
    """Rows of a synthetic label index hitting the published cell counts
    exactly (IDs are sequential placeholders)."""
    next_id = 2_000_000_000_000
    for (post_kind, claim_kind, label), count in COAID_CELLS.items():
        for _ in range(count):
            yield (str(next_id), "fake" if label == 1 else "real", claim_kind, post_kind)
            next_id += 1


def write_coaid_index(path: str | Path) -> int:
    """Write the synthetic index CSV; returns the row count (183,564)."""
    count = 0
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INDEX_HEADER)
        for row in coaid_index_rows():
            writer.writerow(row)
            count += 1
    return count


def write_index_for(records: list[TweetRecord], path: str | Path) -> None:
    """Label index CSV matching a record list (for fixture-mode runs)."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INDEX_HEADER)
        for rec in records:
            writer.writerow([rec.tweet_id, rec.label, rec.claim_kind, rec.post_kind])
