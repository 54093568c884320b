import random

import pytest

from infodemic.corpus import (
    Dataset,
    ingest,
    load_label_index,
    read_records,
    summarize,
    summarize_index,
    write_records,
)
from infodemic.errors import DataError
from infodemic.synthetic import COAID_CELLS, write_coaid_index

from conftest import make_record


def write_index(tmp_path, rows, header="id,label,claim_kind,post_kind"):
    path = tmp_path / "index.csv"
    path.write_text(header + "\n" + "".join(r + "\n" for r in rows), encoding="utf-8")
    return path


class TestLoadLabelIndex:
    def test_two_rows(self, tmp_path):
        path = write_index(
            tmp_path, ["111,fake,claim,tweet", "222,real,news_article,reply"]
        )
        index = load_label_index(path)
        assert len(index) == 2
        assert [e.label for e in index.entries] == [1, 0]
        assert index.entries[0].tweet_id == "111"
        assert index.entries[1].post_kind == "reply"
        assert index.rejects == []

    def test_header_only(self, tmp_path):
        index = load_label_index(write_index(tmp_path, []))
        assert len(index) == 0
        assert index.rejects == []

    def test_numeric_labels_accepted(self, tmp_path):
        index = load_label_index(
            write_index(tmp_path, ["1,1,claim,tweet", "2,0,claim,tweet"])
        )
        assert [e.label for e in index.entries] == [1, 0]

    def test_bad_label_rejected_rowwise(self, tmp_path):
        index = load_label_index(
            write_index(tmp_path, ["1,maybe,claim,tweet", "2,fake,claim,tweet"])
        )
        assert len(index) == 1
        assert len(index.rejects) == 1
        line_no, reason = index.rejects[0]
        assert line_no == 2
        assert "label" in reason

    def test_bad_id_and_kinds_rejected(self, tmp_path):
        index = load_label_index(
            write_index(
                tmp_path,
                ["abc,fake,claim,tweet", "3,fake,rumor,tweet", "4,fake,claim,retweet"],
            )
        )
        assert len(index) == 0
        assert len(index.rejects) == 3

    def test_duplicates_flagged_not_dropped(self, tmp_path):
        index = load_label_index(
            write_index(tmp_path, ["5,fake,claim,tweet", "5,real,claim,tweet"])
        )
        assert len(index) == 2
        assert index.duplicate_ids == ["5"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            load_label_index(tmp_path / "nope.csv")

    def test_wrong_header(self, tmp_path):
        with pytest.raises(DataError, match="header"):
            load_label_index(write_index(tmp_path, [], header="tweet,verdict"))


@pytest.fixture(scope="module")
def coaid(tmp_path_factory):
    path = tmp_path_factory.mktemp("coaid") / "coaid.csv"
    assert write_coaid_index(path) == 183_564
    return load_label_index(path)


class TestCoaidIndex:
    """The bundled index generator reproduces the published cell counts."""

    def test_total_entries(self, coaid):
        assert len(coaid) == 183_564
        assert coaid.rejects == []

    def test_cell_counts(self, coaid):
        table = summarize_index(coaid)
        for (post_kind, claim_kind, label), expected in COAID_CELLS.items():
            assert table.counts[(label, claim_kind, post_kind)] == expected

    def test_row_and_column_totals(self, coaid):
        table = summarize_index(coaid)
        assert table.total == 183_564
        assert table.post_kind_total("tweet") == 103_341
        assert table.post_kind_total("reply") == 80_223
        assert table.label_total(1) == 16_019
        assert table.label_total(0) == 167_545
        # computed imbalance: ~8.7% fake rounds to 9
        assert table.imbalance_ratio == (9, 91)


class TestIngest:
    def test_duplicate_collapsed_to_first(self):
        a1 = make_record(tweet_id="a", text="first")
        a2 = make_record(tweet_id="a", text="second")
        b = make_record(tweet_id="b")
        result = ingest([a1, a2, b])
        assert [r.tweet_id for r in result.dataset.records] == ["a", "b"]
        assert result.dataset.records[0].text == "first"
        assert result.duplicate_ids == ["a"]

    def test_missing_content_dropped(self):
        empty = make_record(tweet_id="x", text="", hashtags=[], user_mentions=[])
        result = ingest([empty])
        assert len(result.dataset) == 0
        assert result.missing_ids == ["x"]

    def test_hashtags_alone_count_as_content(self):
        rec = make_record(tweet_id="x", text="", hashtags=["covid"])
        assert len(ingest([rec]).dataset) == 1

    def test_clean_input_identity(self):
        records = [make_record(tweet_id=str(i)) for i in range(5)]
        result = ingest(records)
        assert [r.tweet_id for r in result.dataset.records] == [str(i) for i in range(5)]
        assert result.duplicate_ids == [] and result.missing_ids == []

    def test_idempotent(self):
        records = [
            make_record(tweet_id="a"),
            make_record(tweet_id="a"),
            make_record(tweet_id="b", text="", hashtags=[]),
            make_record(tweet_id="c"),
        ]
        once = ingest(records)
        twice = ingest(once.dataset.records)
        assert [r.tweet_id for r in twice.dataset.records] == [
            r.tweet_id for r in once.dataset.records
        ]
        assert twice.duplicate_ids == [] and twice.missing_ids == []

    def test_degenerate_empty(self):
        result = ingest([])
        assert len(result.dataset) == 0


class TestSummarize:
    def test_imbalance_four_to_ninety_six(self):
        records = [make_record(tweet_id=str(i), label=1) for i in range(4)]
        records += [make_record(tweet_id=str(i + 4), label=0) for i in range(96)]
        table = summarize(Dataset(records=records))
        assert table.imbalance_ratio == (4, 96)

    def test_empty(self):
        table = summarize(Dataset(records=[]))
        assert table.total == 0
        assert all(v == 0 for v in table.counts.values())
        assert table.imbalance_ratio == (0, 0)

    def test_cells_partition_dataset_property(self):
        rng = random.Random(42)
        for _ in range(1000):
            n = rng.randrange(0, 40)
            records = [
                make_record(
                    tweet_id=str(i),
                    label=rng.randrange(2),
                    claim_kind=rng.choice(["claim", "news_article"]),
                    post_kind=rng.choice(["tweet", "reply"]),
                )
                for i in range(n)
            ]
            table = summarize(Dataset(records=records))
            assert sum(table.counts.values()) == n == table.total


class TestRecordIO:
    def test_round_trip(self, tmp_path):
        records = [
            make_record(tweet_id="1", text="masks work", hashtags=["covid"], label=1),
            make_record(
                tweet_id="2",
                user_mentions=["who"],
                urls=["https://x.test/a"],
                retweet_count=7,
                user_verified=True,
                user_location="Leeds",
            ),
        ]
        path = tmp_path / "records.ndjson"
        write_records(records, path)
        back = read_records(path)
        assert back == records

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.ndjson"
        path.write_text("{not json}\n", encoding="utf-8")
        with pytest.raises(DataError, match="invalid JSON"):
            read_records(path)

    def test_invalid_record_fields(self, tmp_path):
        rec = make_record(tweet_id="1")
        path = tmp_path / "records.ndjson"
        write_records([rec], path)
        text = path.read_text(encoding="utf-8").replace('"retweet_count": 0', '"retweet_count": -3')
        path.write_text(text, encoding="utf-8")
        with pytest.raises(DataError, match="retweet_count"):
            read_records(path)
