"""Pipeline configuration: one TOML file, flag overrides at the CLI.

Stage seeds not given explicitly are derived from the master seed, so
a config with only ``[run] seed`` is already fully deterministic. The
serializer emits every resolved value, which makes parse -> serialize
-> parse an identity.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .balance import BalanceConfig
from .errors import ConfigError, DataError
from .evaluate import Metrics
from .models import DEFAULT_HYPERPARAMETERS, KINDS, ModelSpec
from .preprocess import DEFAULT_WORD_COUNT_THRESHOLD
from .seeds import derive_seed
from .vectorize import DEFAULT_TOKEN_CAP

DEFAULT_MASTER_SEED = 0


@dataclass(slots=True)
class PipelineConfig:
    index_path: str = ""
    fixture_path: str = ""
    out_dir: str = "out"
    hydration_mode: str = "fixture"
    word_count_threshold: int = DEFAULT_WORD_COUNT_THRESHOLD
    include_retweet_bin: bool = True
    token_cap: int = DEFAULT_TOKEN_CAP
    balance: BalanceConfig = field(default_factory=BalanceConfig)
    models: list[ModelSpec] = field(default_factory=list)
    k: int = 5
    repeats: int = 6
    mu0: float = 0.93
    alpha: float = 0.05
    ttest_model: str = "linear_svm"
    master_seed: int = DEFAULT_MASTER_SEED
    jobs: int = 1
    external_results: list[tuple[str, Metrics]] = field(default_factory=list)


def default_model_specs(master_seed: int) -> list[ModelSpec]:
    return [
        ModelSpec(kind=kind, seed=derive_seed(master_seed, "model", kind))
        for kind in KINDS
    ]


def from_toml(text: str) -> PipelineConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    try:
        return from_dict(doc)
    except (KeyError, TypeError, ValueError, DataError) as exc:
        raise ConfigError(f"bad configuration: {exc}") from exc


def from_dict(doc: dict) -> PipelineConfig:
    paths = doc.get("paths", {})
    run = doc.get("run", {})
    master_seed = int(run.get("seed", DEFAULT_MASTER_SEED))

    balance_doc = dict(doc.get("balance", {}))
    balance_doc.setdefault("seed", derive_seed(master_seed, "balance"))
    balance = BalanceConfig(
        method=balance_doc.get("method", "oss"),
        target_minority_fraction=float(balance_doc.get("target_minority_fraction", 0.30)),
        distance=balance_doc.get("distance", "euclidean"),
        seed=int(balance_doc["seed"]),
        text_dim=int(balance_doc.get("text_dim", 64)),
    )

    models_doc = doc.get("models")
    if models_doc:
        models = []
        for entry in models_doc:
            kind = entry.get("kind", "")
            models.append(
                ModelSpec(
                    kind=kind,
                    hyperparameters=dict(entry.get("hyperparameters", {})),
                    seed=int(entry.get("seed", derive_seed(master_seed, "model", kind))),
                )
            )
    else:
        models = default_model_specs(master_seed)

    external = []
    for entry in doc.get("external_results", []):
        external.append(
            (
                str(entry["name"]),
                Metrics(
                    accuracy=float(entry["accuracy"]),
                    precision=float(entry["precision"]),
                    recall=float(entry["recall"]),
                    f1=float(entry["f1"]),
                ),
            )
        )

    preprocess = doc.get("preprocess", {})
    vectorize = doc.get("vectorize", {})
    evaluate = doc.get("evaluate", {})
    hydration = doc.get("hydration", {})
    config = PipelineConfig(
        index_path=str(paths.get("index", "")),
        fixture_path=str(paths.get("fixture", "")),
        out_dir=str(paths.get("out", "out")),
        hydration_mode=str(hydration.get("mode", "fixture")),
        word_count_threshold=int(
            preprocess.get("word_count_threshold", DEFAULT_WORD_COUNT_THRESHOLD)
        ),
        include_retweet_bin=bool(preprocess.get("include_retweet_bin", True)),
        token_cap=int(vectorize.get("token_cap", DEFAULT_TOKEN_CAP)),
        balance=balance,
        models=models,
        k=int(evaluate.get("k", 5)),
        repeats=int(evaluate.get("repeats", 6)),
        mu0=float(evaluate.get("mu0", 0.93)),
        alpha=float(evaluate.get("alpha", 0.05)),
        ttest_model=str(evaluate.get("ttest_model", "linear_svm")),
        master_seed=master_seed,
        jobs=int(run.get("jobs", 1)),
        external_results=external,
    )
    _validate(config)
    return config


def _validate(config: PipelineConfig) -> None:
    if config.hydration_mode not in ("fixture", "live"):
        raise ConfigError(f"hydration mode must be fixture or live, got {config.hydration_mode!r}")
    if config.k < 2:
        raise ConfigError("evaluate.k must be at least 2")
    if config.repeats < 1:
        raise ConfigError("evaluate.repeats must be at least 1")
    if config.word_count_threshold < 1:
        raise ConfigError("preprocess.word_count_threshold must be positive")
    if config.token_cap < 1:
        raise ConfigError("vectorize.token_cap must be positive")
    if not 0.0 < config.alpha < 1.0:
        raise ConfigError("evaluate.alpha must be in (0, 1)")
    if config.jobs < 1:
        raise ConfigError("run.jobs must be at least 1")
    seen = set()
    for spec in config.models:
        if spec.kind in seen:
            raise ConfigError(f"model kind {spec.kind!r} listed twice")
        seen.add(spec.kind)


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return from_toml(path.read_text(encoding="utf-8"))


# --- serialization -------------------------------------------------------------


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise ConfigError(f"cannot serialize config value {value!r}")


def to_toml(config: PipelineConfig) -> str:
    lines = []

    def table(name: str, pairs: dict) -> None:
        lines.append(f"[{name}]")
        for key, value in pairs.items():
            lines.append(f"{key} = {_toml_scalar(value)}")
        lines.append("")

    table("paths", {"index": config.index_path, "fixture": config.fixture_path, "out": config.out_dir})
    table("hydration", {"mode": config.hydration_mode})
    table(
        "preprocess",
        {
            "word_count_threshold": config.word_count_threshold,
            "include_retweet_bin": config.include_retweet_bin,
        },
    )
    table("vectorize", {"token_cap": config.token_cap})
    table(
        "balance",
        {
            "method": config.balance.method,
            "target_minority_fraction": config.balance.target_minority_fraction,
            "distance": config.balance.distance,
            "text_dim": config.balance.text_dim,
            "seed": config.balance.seed,
        },
    )
    table(
        "evaluate",
        {
            "k": config.k,
            "repeats": config.repeats,
            "mu0": config.mu0,
            "alpha": config.alpha,
            "ttest_model": config.ttest_model,
        },
    )
    table("run", {"seed": config.master_seed, "jobs": config.jobs})
    for spec in config.models:
        lines.append("[[models]]")
        lines.append(f"kind = {json.dumps(spec.kind)}")
        lines.append(f"seed = {spec.seed}")
        lines.append("[models.hyperparameters]")
        for key in sorted(spec.hyperparameters):
            lines.append(f"{key} = {_toml_scalar(spec.hyperparameters[key])}")
        lines.append("")
    for name, m in config.external_results:
        lines.append("[[external_results]]")
        lines.append(f"name = {json.dumps(name)}")
        for metric, value in m.as_dict().items():
            lines.append(f"{metric} = {_toml_scalar(value)}")
        lines.append("")
    return "\n".join(lines)


def snapshot(config: PipelineConfig, include_paths: bool = True) -> dict:
    """JSON-safe dump of the resolved settings, embedded in manifests and
    reports. Reports omit paths: they record what determines the results,
    and input identity is carried by provenance content hashes instead."""
    doc = {
        "preprocess": {
            "word_count_threshold": config.word_count_threshold,
            "include_retweet_bin": config.include_retweet_bin,
        },
        "vectorize": {"token_cap": config.token_cap},
        "balance": {
            "method": config.balance.method,
            "target_minority_fraction": config.balance.target_minority_fraction,
            "distance": config.balance.distance,
            "text_dim": config.balance.text_dim,
            "seed": config.balance.seed,
        },
        "evaluate": {
            "k": config.k,
            "repeats": config.repeats,
            "mu0": config.mu0,
            "alpha": config.alpha,
            "ttest_model": config.ttest_model,
        },
        "run": {"seed": config.master_seed, "jobs": config.jobs},
        "models": [
            {"kind": s.kind, "seed": s.seed, "hyperparameters": dict(s.hyperparameters)}
            for s in config.models
        ],
        "external_results": [
            {"name": name, **m.as_dict()} for name, m in config.external_results
        ],
    }
    if include_paths:
        doc["paths"] = {
            "index": config.index_path,
            "fixture": config.fixture_path,
            "out": config.out_dir,
        }
        doc["hydration"] = {"mode": config.hydration_mode}
    return doc
