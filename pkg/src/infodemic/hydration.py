"""Resolve tweet IDs from a label index into full records.

Two modes. Fixture mode reads a newline-delimited JSON file of records
and is the canonical, reproducible path: deleted and suspended tweets
make a live re-pull of the full corpus unrepeatable, so live mode is
best effort. Live mode batches IDs (at most 100 per lookup call),
honors the server's rate-limit reset signal on HTTP 429, and may run
batches concurrently; results are reassembled in index order either way.
"""

from __future__ import annotations

import json
import os
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from .corpus import Dataset, LabelIndex, TweetRecord, read_records
from .errors import AuthenticationError, DataError, HydrationError

MAX_IDS_PER_REQUEST = 100
BEARER_TOKEN_ENV = "INFODEMIC_BEARER_TOKEN"
DEFAULT_ENDPOINT = "https://api.twitter.com/2/tweets"

# (status_code, headers, parsed JSON body)
FetchResult = tuple[int, dict[str, str], dict]
Fetcher = Callable[[str, dict[str, str], dict[str, str]], FetchResult]


@dataclass(slots=True)
class HydrationConfig:
    mode: str = "fixture"  # "fixture" | "live"
    fixture_path: str | None = None
    endpoint: str = DEFAULT_ENDPOINT
    batch_size: int = MAX_IDS_PER_REQUEST
    max_retries: int = 5
    parallelism: int = 1
    timeout_s: float = 30.0

    def __post_init__(self) -> None:
        if self.mode not in ("fixture", "live"):
            raise DataError(f"hydration mode must be fixture or live, got {self.mode!r}")
        if not 1 <= self.batch_size <= MAX_IDS_PER_REQUEST:
            raise DataError(f"batch_size must be in 1..{MAX_IDS_PER_REQUEST}")


@dataclass(slots=True)
class HydrationResult:
    dataset: Dataset
    not_found: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def hydrate(
    index: LabelIndex,
    config: HydrationConfig,
    fetch: Fetcher | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> HydrationResult:
    """Produce one record per index ID found at the source.

    IDs absent from the source go to ``not_found``; batch-level failures
    after bounded retries go to ``errors`` alongside a partial dataset,
    never a silent truncation. ``fetch`` is injectable for tests.
    """
    if config.mode == "fixture":
        return _hydrate_fixture(index, config)
    return _hydrate_live(index, config, fetch or _urllib_fetch, sleep)


def _hydrate_fixture(index: LabelIndex, config: HydrationConfig) -> HydrationResult:
    if not config.fixture_path:
        raise DataError("fixture mode requires a fixture file path")
    by_id = {rec.tweet_id: rec for rec in read_records(config.fixture_path)}
    records: list[TweetRecord] = []
    not_found: list[str] = []
    for entry in index.entries:
        rec = by_id.get(entry.tweet_id)
        if rec is None:
            not_found.append(entry.tweet_id)
            continue
        rec.label = entry.label
        rec.claim_kind = entry.claim_kind
        rec.post_kind = entry.post_kind
        records.append(rec)
    dataset = Dataset(records=records, provenance=f"fixture:{config.fixture_path}")
    return HydrationResult(dataset=dataset, not_found=not_found)


def _hydrate_live(
    index: LabelIndex,
    config: HydrationConfig,
    fetch: Fetcher,
    sleep: Callable[[float], None],
) -> HydrationResult:
    token = os.environ.get(BEARER_TOKEN_ENV, "")
    if not token:
        raise AuthenticationError(f"live hydration needs a bearer token in ${BEARER_TOKEN_ENV}")
    headers = {"Authorization": f"Bearer {token}"}

    ids = [e.tweet_id for e in index.entries]
    batches = [ids[i : i + config.batch_size] for i in range(0, len(ids), config.batch_size)]

    def run_batch(batch: list[str]) -> tuple[dict[str, TweetRecord], list[str], list[str]]:
        return _lookup_batch(batch, config, headers, fetch, sleep)

    found: dict[str, TweetRecord] = {}
    not_found: list[str] = []
    errors: list[str] = []
    if config.parallelism > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(pool.map(run_batch, batches))
    else:
        outcomes = [run_batch(b) for b in batches]
    for got, missing, errs in outcomes:
        found.update(got)
        not_found.extend(missing)
        errors.extend(errs)

    # reassemble in index order so output is order-deterministic
    records: list[TweetRecord] = []
    for entry in index.entries:
        rec = found.get(entry.tweet_id)
        if rec is None:
            continue
        rec.label = entry.label
        rec.claim_kind = entry.claim_kind
        rec.post_kind = entry.post_kind
        records.append(rec)
    dataset = Dataset(records=records, provenance=f"live:{config.endpoint}")
    return HydrationResult(dataset=dataset, not_found=not_found, errors=errors)


def _lookup_batch(
    batch: list[str],
    config: HydrationConfig,
    headers: dict[str, str],
    fetch: Fetcher,
    sleep: Callable[[float], None],
) -> tuple[dict[str, TweetRecord], list[str], list[str]]:
    params = {
        "ids": ",".join(batch),
        "tweet.fields": "created_at,entities,public_metrics,author_id",
        "expansions": "author_id",
        "user.fields": "created_at,location,name,username,verified",
    }
    retries = 0
    while True:
        try:
            status, resp_headers, body = fetch(config.endpoint, params, headers)
        except (urllib.error.URLError, OSError) as exc:
            retries += 1
            if retries > config.max_retries:
                return {}, [], [f"batch of {len(batch)}: network failure after {retries - 1} retries: {exc}"]
            sleep(min(2.0 ** retries, 30.0))
            continue
        if status == 429:
            retries += 1
            if retries > config.max_retries:
                return {}, [], [f"batch of {len(batch)}: rate limited after {config.max_retries} retries"]
            sleep(_retry_delay(resp_headers))
            continue
        if status in (401, 403):
            raise AuthenticationError(f"tweet lookup rejected credentials (HTTP {status})")
        if status != 200:
            retries += 1
            if retries > config.max_retries:
                return {}, [], [f"batch of {len(batch)}: HTTP {status} after {retries - 1} retries"]
            sleep(min(2.0 ** retries, 30.0))
            continue
        return _parse_lookup_response(body, batch)


def _retry_delay(headers: dict[str, str]) -> float:
    lowered = {k.lower(): v for k, v in headers.items()}
    reset = lowered.get("x-rate-limit-reset")
    if reset is not None:
        try:
            return max(0.0, float(reset) - time.time()) + 1.0
        except ValueError:
            pass
    retry_after = lowered.get("retry-after")
    if retry_after is not None:
        try:
            return max(0.0, float(retry_after))
        except ValueError:
            pass
    return 60.0


def _parse_lookup_response(
    body: dict, batch: list[str]
) -> tuple[dict[str, TweetRecord], list[str], list[str]]:
    users = {u.get("id"): u for u in body.get("includes", {}).get("users", [])}
    collected_at = datetime.now(timezone.utc).replace(microsecond=0)
    found: dict[str, TweetRecord] = {}
    for tweet in body.get("data", []):
        try:
            found[str(tweet["id"])] = _record_from_api(tweet, users, collected_at)
        except (KeyError, ValueError) as exc:
            raise HydrationError(f"unparseable tweet object {tweet.get('id')}: {exc}") from exc
    returned_missing = {
        str(err.get("resource_id") or err.get("value", ""))
        for err in body.get("errors", [])
    }
    not_found = [tid for tid in batch if tid not in found]
    unexplained = [tid for tid in not_found if tid not in returned_missing]
    errors = []
    if unexplained and body.get("errors"):
        errors.append(f"{len(unexplained)} IDs missing without a per-ID error entry")
    return found, not_found, errors


def _record_from_api(tweet: dict, users: dict, collected_at: datetime) -> TweetRecord:
    entities = tweet.get("entities") or {}
    user = users.get(tweet.get("author_id"), {})
    created = _parse_api_time(user.get("created_at"), default=collected_at)
    return TweetRecord(
        tweet_id=str(tweet["id"]),
        text=str(tweet.get("text", "")),
        hashtags=[h["tag"] for h in entities.get("hashtags", []) if h.get("tag")],
        user_mentions=[m["username"] for m in entities.get("mentions", []) if m.get("username")],
        urls=[u.get("expanded_url") or u.get("url") for u in entities.get("urls", []) if u.get("expanded_url") or u.get("url")],
        retweet_count=int((tweet.get("public_metrics") or {}).get("retweet_count", 0)),
        user_name=str(user.get("username") or user.get("name") or ""),
        user_location=str(user.get("location") or ""),
        user_verified=bool(user.get("verified", False)),
        account_created_at=min(created, collected_at),
        collected_at=collected_at,
        label=0,
    )


def _parse_api_time(value: str | None, default: datetime) -> datetime:
    if not value:
        return default
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00")).astimezone(timezone.utc)
    except ValueError:
        return default


def _urllib_fetch(endpoint: str, params: dict[str, str], headers: dict[str, str]) -> FetchResult:
    url = f"{endpoint}?{urllib.parse.urlencode(params)}"
    request = urllib.request.Request(url, headers=headers)
    try:
        with urllib.request.urlopen(request, timeout=30.0) as resp:
            return resp.status, dict(resp.headers.items()), json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as exc:
        payload: dict = {}
        try:
            payload = json.loads(exc.read().decode("utf-8"))
        except (ValueError, OSError):
            pass
        return exc.code, dict(exc.headers.items()), payload
