import pytest

from infodemic.config import (
    PipelineConfig,
    from_toml,
    load_config,
    snapshot,
    to_toml,
)
from infodemic.errors import ConfigError

MINIMAL = """
[paths]
index = "index.csv"
fixture = "fixture.ndjson"

[run]
seed = 42
"""

FULL = """
[paths]
index = "data/index.csv"
fixture = "data/fixture.ndjson"
out = "results"

[hydration]
mode = "fixture"

[preprocess]
word_count_threshold = 12
include_retweet_bin = false

[vectorize]
token_cap = 500

[balance]
method = "random_under"
target_minority_fraction = 0.25
distance = "cosine"
text_dim = 32
seed = 77

[evaluate]
k = 4
repeats = 3
mu0 = 0.9
alpha = 0.01
ttest_model = "mnb"

[run]
seed = 5
jobs = 2

[[models]]
kind = "mnb"
seed = 13
[models.hyperparameters]
alpha = 0.5

[[models]]
kind = "linear_svm"
[models.hyperparameters]
C = 2.0
epochs = 20

[[external_results]]
name = "RNN"
accuracy = 0.86
precision = 0.89
recall = 0.80
f1 = 0.83
"""


class TestParse:
    def test_defaults_fill_in(self):
        config = from_toml(MINIMAL)
        assert config.word_count_threshold == 10
        assert config.token_cap == 5000
        assert config.balance.method == "oss"
        assert config.balance.target_minority_fraction == 0.30
        assert config.k == 5 and config.repeats == 6
        assert config.mu0 == 0.93 and config.alpha == 0.05
        assert [s.kind for s in config.models] == [
            "mnb",
            "logreg",
            "linear_svm",
            "random_forest",
        ]

    def test_seeds_derived_from_master(self):
        a = from_toml(MINIMAL)
        b = from_toml(MINIMAL.replace("seed = 42", "seed = 43"))
        assert a.balance.seed != b.balance.seed
        assert a.models[0].seed != b.models[0].seed
        assert a.balance.seed == from_toml(MINIMAL).balance.seed

    def test_full_config(self):
        config = from_toml(FULL)
        assert config.hydration_mode == "fixture"
        assert config.include_retweet_bin is False
        assert config.balance.distance == "cosine"
        assert config.models[0].hyperparameters["alpha"] == 0.5
        # unset hyperparameters resolve to kind defaults
        assert config.models[1].hyperparameters["C"] == 2.0
        assert config.ttest_model == "mnb"
        assert config.external_results[0][0] == "RNN"
        assert config.external_results[0][1].accuracy == 0.86

    def test_invalid_toml(self):
        with pytest.raises(ConfigError, match="TOML"):
            from_toml("[broken")

    def test_unknown_hyperparameter(self):
        bad = MINIMAL + '\n[[models]]\nkind = "mnb"\n[models.hyperparameters]\ngamma = 1.0\n'
        with pytest.raises(ConfigError, match="gamma"):
            from_toml(bad)

    def test_duplicate_model_kind(self):
        bad = MINIMAL + '\n[[models]]\nkind = "mnb"\n\n[[models]]\nkind = "mnb"\n'
        with pytest.raises(ConfigError, match="twice"):
            from_toml(bad)

    def test_bad_k(self):
        with pytest.raises(ConfigError, match="k"):
            from_toml(MINIMAL + "\n[evaluate]\nk = 1\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "none.toml")


class TestRoundTrip:
    @pytest.mark.parametrize("text", [MINIMAL, FULL])
    def test_parse_serialize_parse_is_identity(self, text):
        config = from_toml(text)
        again = from_toml(to_toml(config))
        assert again == config

    def test_serialized_form_is_stable(self):
        config = from_toml(FULL)
        assert to_toml(from_toml(to_toml(config))) == to_toml(config)


class TestSnapshot:
    def test_report_snapshot_omits_paths(self):
        config = from_toml(FULL)
        doc = snapshot(config, include_paths=False)
        assert "paths" not in doc and "hydration" not in doc
        assert doc["balance"]["seed"] == 77
        full = snapshot(config)
        assert full["paths"]["out"] == "results"
