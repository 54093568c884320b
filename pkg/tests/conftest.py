"""Shared test helpers."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

from infodemic.corpus import TweetRecord

COLLECTED = datetime(2020, 5, 1, tzinfo=timezone.utc)


def make_record(
    tweet_id: str = "1",
    text: str = "masks work",
    hashtags: list[str] | None = None,
    user_mentions: list[str] | None = None,
    urls: list[str] | None = None,
    retweet_count: int = 0,
    user_name: str = "",
    user_location: str = "",
    user_verified: bool = False,
    account_age_days: float = 100.0,
    label: int = 0,
    claim_kind: str = "claim",
    post_kind: str = "tweet",
) -> TweetRecord:
    return TweetRecord(
        tweet_id=tweet_id,
        text=text,
        hashtags=hashtags or [],
        user_mentions=user_mentions or [],
        urls=urls or [],
        retweet_count=retweet_count,
        user_name=user_name,
        user_location=user_location,
        user_verified=user_verified,
        account_created_at=COLLECTED - timedelta(days=account_age_days),
        collected_at=COLLECTED,
        label=label,
        claim_kind=claim_kind,
        post_kind=post_kind,
    )
