import pytest

from infodemic.corpus import LabelIndex, IndexEntry, write_records
from infodemic.errors import AuthenticationError, DataError
from infodemic.hydration import HydrationConfig, hydrate

from conftest import make_record


def index_of(*ids, label=1):
    return LabelIndex(
        entries=[IndexEntry(str(i), label, "claim", "tweet") for i in ids]
    )


class TestFixtureMode:
    def test_all_ids_found(self, tmp_path):
        fixture = tmp_path / "fixture.ndjson"
        write_records([make_record(tweet_id="10"), make_record(tweet_id="11")], fixture)
        result = hydrate(index_of("10", "11"), HydrationConfig(fixture_path=str(fixture)))
        assert [r.tweet_id for r in result.dataset.records] == ["10", "11"]
        assert result.not_found == []
        # labels come from the index, not the fixture
        assert all(r.label == 1 for r in result.dataset.records)

    def test_missing_ids_reported(self, tmp_path):
        fixture = tmp_path / "fixture.ndjson"
        write_records([make_record(tweet_id="10")], fixture)
        result = hydrate(
            index_of("10", "11", "12"), HydrationConfig(fixture_path=str(fixture))
        )
        assert len(result.dataset) == 1
        assert result.not_found == ["11", "12"]

    def test_pure_given_same_inputs(self, tmp_path):
        fixture = tmp_path / "fixture.ndjson"
        write_records([make_record(tweet_id=str(i)) for i in range(5)], fixture)
        cfg = HydrationConfig(fixture_path=str(fixture))
        index = index_of(*range(5))
        a = hydrate(index, cfg)
        b = hydrate(index, cfg)
        assert a.dataset.records == b.dataset.records

    def test_fixture_path_required(self):
        with pytest.raises(DataError, match="fixture"):
            hydrate(index_of("1"), HydrationConfig(mode="fixture", fixture_path=None))

    def test_fixture_file_missing(self, tmp_path):
        cfg = HydrationConfig(fixture_path=str(tmp_path / "nope.ndjson"))
        with pytest.raises(DataError, match="not found"):
            hydrate(index_of("1"), cfg)


def api_payload(ids):
    return {
        "data": [
            {
                "id": str(i),
                "text": f"tweet {i}",
                "author_id": "u1",
                "created_at": "2020-04-01T00:00:00Z",
                "public_metrics": {"retweet_count": 2},
                "entities": {"hashtags": [{"tag": "covid"}]},
            }
            for i in ids
        ],
        "includes": {
            "users": [
                {
                    "id": "u1",
                    "username": "ana",
                    "location": "Leeds",
                    "verified": True,
                    "created_at": "2019-01-01T00:00:00Z",
                }
            ]
        },
    }


class TestLiveMode:
    @pytest.fixture(autouse=True)
    def token(self, monkeypatch):
        monkeypatch.setenv("INFODEMIC_BEARER_TOKEN", "secret")

    def test_batches_of_at_most_100(self):
        sizes = []

        def fetch(url, params, headers):
            ids = params["ids"].split(",")
            sizes.append(len(ids))
            assert headers["Authorization"] == "Bearer secret"
            return 200, {}, api_payload(ids)

        index = index_of(*range(250))
        result = hydrate(index, HydrationConfig(mode="live"), fetch=fetch)
        assert sizes == [100, 100, 50]
        assert len(result.dataset) == 250
        assert [r.tweet_id for r in result.dataset.records] == [str(i) for i in range(250)]

    def test_missing_token(self, monkeypatch):
        monkeypatch.delenv("INFODEMIC_BEARER_TOKEN")
        with pytest.raises(AuthenticationError):
            hydrate(index_of("1"), HydrationConfig(mode="live"), fetch=lambda *a: None)

    def test_auth_failure(self):
        def fetch(url, params, headers):
            return 401, {}, {}

        with pytest.raises(AuthenticationError):
            hydrate(index_of("1"), HydrationConfig(mode="live"), fetch=fetch)

    def test_429_sleeps_until_reset(self):
        calls = []
        naps = []

        def fetch(url, params, headers):
            calls.append(1)
            if len(calls) == 1:
                return 429, {"x-rate-limit-reset": "0"}, {}
            return 200, {}, api_payload(params["ids"].split(","))

        result = hydrate(
            index_of("1"),
            HydrationConfig(mode="live"),
            fetch=fetch,
            sleep=naps.append,
        )
        assert len(calls) == 2
        assert len(naps) == 1
        assert len(result.dataset) == 1

    def test_429_gives_up_after_max_retries(self):
        def fetch(url, params, headers):
            return 429, {"x-rate-limit-reset": "0"}, {}

        result = hydrate(
            index_of("1"),
            HydrationConfig(mode="live", max_retries=2),
            fetch=fetch,
            sleep=lambda s: None,
        )
        assert len(result.dataset) == 0
        assert any("rate limited" in e for e in result.errors)

    def test_partial_dataset_on_batch_failure(self):
        def fetch(url, params, headers):
            ids = params["ids"].split(",")
            if "150" in ids:
                return 500, {}, {}
            return 200, {}, api_payload(ids)

        index = index_of(*range(200))
        result = hydrate(
            index,
            HydrationConfig(mode="live", max_retries=1),
            fetch=fetch,
            sleep=lambda s: None,
        )
        # first batch of 100 succeeds; second fails and is reported
        assert len(result.dataset) == 100
        assert len(result.errors) == 1

    def test_deleted_ids_in_not_found(self):
        def fetch(url, params, headers):
            ids = params["ids"].split(",")
            payload = api_payload([i for i in ids if i != "2"])
            payload["errors"] = [{"resource_id": "2", "title": "Not Found Error"}]
            return 200, {}, payload

        result = hydrate(index_of("1", "2", "3"), HydrationConfig(mode="live"), fetch=fetch)
        assert [r.tweet_id for r in result.dataset.records] == ["1", "3"]
        assert result.not_found == ["2"]

    def test_parallel_results_in_index_order(self):
        def fetch(url, params, headers):
            return 200, {}, api_payload(params["ids"].split(","))

        index = index_of(*range(250))
        cfg = HydrationConfig(mode="live", parallelism=4)
        result = hydrate(index, cfg, fetch=fetch)
        assert [r.tweet_id for r in result.dataset.records] == [str(i) for i in range(250)]


class TestConfigValidation:
    def test_bad_mode(self):
        with pytest.raises(DataError):
            HydrationConfig(mode="offline")

    def test_batch_size_capped(self):
        with pytest.raises(DataError):
            HydrationConfig(batch_size=101)
