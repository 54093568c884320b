"""Batch pipeline front-end.

Verbs follow the pipeline's stage order (hydrate -> prepare -> balance
-> train -> evaluate -> predict); each consumes only artifacts written
by earlier stages and writes a manifest beside every artifact. Exit
codes are a stable contract: 0 success, 1 usage/config error, 2 data
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .balance import rebalance
from .config import PipelineConfig, from_dict, load_config, snapshot
from .corpus import TweetRecord, ingest, load_label_index, read_records, write_records
from .errors import ConfigError, DataError, InfodemicError
from .evaluate import (
    build_report,
    cross_validate,
    render_report,
    report_from_json,
)
from .hydration import HydrationConfig, hydrate
from .manifest import sha256_file, write_manifest
from .models import (
    RAW_FEATURE_KINDS,
    decision_score,
    load_model,
    predict,
    read_header,
    save_model,
    train,
)
from .preprocess import (
    Thresholds,
    extract_all,
    extract_features,
    fit_thresholds,
    numeric_fields,
    read_rows_csv,
    write_rows_csv,
)
from .vectorize import fingerprint, fit, transform, transform_all

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DATASET_FILE = "dataset.ndjson"
FEATURES_FILE = "features.csv"
THRESHOLDS_FILE = "thresholds.json"
BALANCE_KEPT_FILE = "balance_kept.csv"
BALANCE_REMOVED_FILE = "balance_removed.csv"
REPORT_JSON_FILE = "report.json"
REPORT_MD_FILE = "report.md"
FOLDS_CSV_FILE = "folds.csv"

_PRODUCERS = {
    DATASET_FILE: "hydrate",
    FEATURES_FILE: "prepare",
    THRESHOLDS_FILE: "prepare",
    BALANCE_KEPT_FILE: "balance",
}


def _require_artifact(path: Path) -> Path:
    if not path.is_file():
        producer = _PRODUCERS.get(path.name, "an earlier stage")
        raise DataError(
            f"missing upstream artifact {path}; run `infodemic {producer}` first"
        )
    return path


def _load_pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    if not args.config:
        raise ConfigError("this command needs --config pointing at a TOML file")
    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    # flags win over the file
    if args.seed is not None:
        doc.setdefault("run", {})["seed"] = args.seed
    if args.jobs is not None:
        doc.setdefault("run", {})["jobs"] = args.jobs
    if args.out is not None:
        doc.setdefault("paths", {})["out"] = args.out
    try:
        return from_dict(doc)
    except (KeyError, TypeError, ValueError, DataError) as exc:
        raise ConfigError(f"bad configuration: {exc}") from exc


def _out_dir(config: PipelineConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _hydrate_dataset(config: PipelineConfig, out: Path) -> Path:
    if not config.index_path:
        raise ConfigError("paths.index is required for hydration")
    index = load_label_index(config.index_path)
    hydration_config = HydrationConfig(
        mode=config.hydration_mode,
        fixture_path=config.fixture_path or None,
        parallelism=config.jobs,
    )
    result = hydrate(index, hydration_config)
    cleaned = ingest(result.dataset.records, provenance=result.dataset.provenance)

    dataset_path = out / DATASET_FILE
    write_records(cleaned.dataset.records, dataset_path)
    inputs: dict[str, str] = {"index": config.index_path}
    if config.hydration_mode == "fixture":
        inputs["fixture"] = config.fixture_path
    write_manifest(
        dataset_path,
        command="hydrate",
        inputs=inputs,
        config_snapshot=snapshot(config),
        seeds={"master": config.master_seed},
    )
    print(
        f"hydrated {len(cleaned.dataset.records)} records "
        f"({len(result.not_found)} not found, {len(index.rejects)} index rejects, "
        f"{len(cleaned.duplicate_ids)} duplicates dropped, "
        f"{len(cleaned.missing_ids)} empty records dropped) -> {dataset_path}"
    )
    for err in result.errors:
        print(f"warning: {err}", file=sys.stderr)
    return dataset_path


def cmd_hydrate(args: argparse.Namespace) -> int:
    config = _load_pipeline_config(args)
    _hydrate_dataset(config, _out_dir(config))
    return 0


def cmd_prepare(args: argparse.Namespace) -> int:
    config = _load_pipeline_config(args)
    out = _out_dir(config)
    dataset_path = _require_artifact(out / DATASET_FILE)
    records = read_records(dataset_path)
    thresholds = fit_thresholds(
        records, config.word_count_threshold, fitted_on="full-dataset"
    )
    rows = extract_all(records, thresholds)

    features_path = out / FEATURES_FILE
    write_rows_csv(rows, features_path)
    thresholds_path = out / THRESHOLDS_FILE
    thresholds_path.write_text(
        json.dumps(
            {
                "word_count_threshold": thresholds.word_count_threshold,
                "account_age_threshold_days": thresholds.account_age_threshold_days,
                "retweet_count_threshold": thresholds.retweet_count_threshold,
                "fitted_on": thresholds.fitted_on,
            },
            sort_keys=True,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    for artifact in (features_path, thresholds_path):
        write_manifest(
            artifact,
            command="prepare",
            inputs={"dataset": dataset_path},
            config_snapshot=snapshot(config),
            seeds={"master": config.master_seed},
        )
    print(f"prepared {len(rows)} feature rows -> {features_path}")
    return 0


def cmd_balance(args: argparse.Namespace) -> int:
    config = _load_pipeline_config(args)
    out = _out_dir(config)
    features_path = _require_artifact(out / FEATURES_FILE)
    rows = read_rows_csv(features_path)
    kept = rebalance(rows, config.balance, include_retweet=config.include_retweet_bin)
    removed = sorted(set(range(len(rows))) - set(kept))

    kept_path = out / BALANCE_KEPT_FILE
    kept_path.write_text(
        "row_index\n" + "".join(f"{i}\n" for i in kept), encoding="utf-8"
    )
    removed_path = out / BALANCE_REMOVED_FILE
    removed_path.write_text(
        "row_index\n" + "".join(f"{i}\n" for i in removed), encoding="utf-8"
    )
    for artifact in (kept_path, removed_path):
        write_manifest(
            artifact,
            command="balance",
            inputs={"features": features_path},
            config_snapshot=snapshot(config),
            seeds={"master": config.master_seed, "balance": config.balance.seed},
        )
    fake = sum(1 for i in kept if rows[i].label == 1)
    print(
        f"balance ({config.balance.method}): kept {len(kept)} rows "
        f"({fake} fake / {len(kept) - fake} real), removed {len(removed)} -> {kept_path}"
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_pipeline_config(args)
    out = _out_dir(config)
    features_path = _require_artifact(out / FEATURES_FILE)
    thresholds_path = _require_artifact(out / THRESHOLDS_FILE)
    kept_path = _require_artifact(out / BALANCE_KEPT_FILE)

    rows = read_rows_csv(features_path)
    thresholds = Thresholds(**json.loads(thresholds_path.read_text(encoding="utf-8")))
    kept = [
        int(line)
        for line in kept_path.read_text(encoding="utf-8").splitlines()[1:]
        if line.strip()
    ]
    kept_rows = [rows[i] for i in kept]

    vectorizer = fit(
        kept_rows,
        cap=config.token_cap,
        numeric_field_names=numeric_fields(config.include_retweet_bin),
    )
    fp = fingerprint(vectorizer)
    for spec in config.models:
        standardize = spec.kind not in RAW_FEATURE_KINDS
        vectors = transform_all(kept_rows, vectorizer, standardize)
        model = train(
            spec,
            vectors,
            n_sparse=vectorizer.n_sparse,
            n_dense=vectorizer.n_dense,
            vectorizer_fingerprint=fp,
        )
        model_path = out / f"model_{spec.kind}.bin"
        save_model(model, model_path, vectorizer=vectorizer, thresholds=thresholds)
        write_manifest(
            model_path,
            command="train",
            inputs={
                "features": features_path,
                "thresholds": thresholds_path,
                "kept": kept_path,
            },
            config_snapshot=snapshot(config),
            seeds={"master": config.master_seed, f"model_{spec.kind}": spec.seed},
        )
        print(f"trained {spec.kind} on {len(kept_rows)} rows -> {model_path}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_pipeline_config(args)
    out = _out_dir(config)
    dataset_path = out / DATASET_FILE
    if not dataset_path.is_file():
        if not config.index_path:
            raise DataError(
                f"missing upstream artifact {dataset_path}; run `infodemic hydrate` "
                "first or set paths.index so evaluate can hydrate internally"
            )
        dataset_path = _hydrate_dataset(config, out)
    records = read_records(dataset_path)

    results = []
    for spec in config.models:
        folds = cross_validate(
            spec,
            records,
            k=config.k,
            repeats=config.repeats,
            seed=config.master_seed,
            word_count_threshold=config.word_count_threshold,
            token_cap=config.token_cap,
            balance=config.balance,
            include_retweet=config.include_retweet_bin,
        )
        results.append((spec, folds))
        mean = sum(m.accuracy for m in folds) / len(folds)
        print(f"evaluated {spec.kind}: mean accuracy {mean:.4f} over {len(folds)} folds")

    provenance = f"dataset:{dataset_path.name} sha256:{sha256_file(dataset_path)}"
    report = build_report(
        results,
        k=config.k,
        repeats=config.repeats,
        provenance=provenance,
        config=snapshot(config, include_paths=False),
        mu0=config.mu0,
        alpha=config.alpha,
        ttest_kind=config.ttest_model,
        external=config.external_results,
    )
    artifacts = {
        REPORT_JSON_FILE: render_report(report, "json"),
        REPORT_MD_FILE: render_report(report, "markdown"),
        FOLDS_CSV_FILE: render_report(report, "csv"),
    }
    for name, content in artifacts.items():
        path = out / name
        path.write_text(content, encoding="utf-8")
        write_manifest(
            path,
            command="evaluate",
            inputs={"dataset": dataset_path},
            config_snapshot=snapshot(config),
            seeds={"master": config.master_seed, "balance": config.balance.seed},
        )
    print(artifacts[REPORT_MD_FILE], end="")
    return 0


def _bare_record(text: str) -> TweetRecord:
    moment = datetime(1970, 1, 1, tzinfo=timezone.utc)
    return TweetRecord(
        tweet_id="0",
        text=text,
        hashtags=[],
        user_mentions=[],
        urls=[],
        retweet_count=0,
        user_name="",
        user_location="",
        user_verified=False,
        account_created_at=moment,
        collected_at=moment,
        label=0,
    )


def cmd_predict(args: argparse.Namespace) -> int:
    loaded = load_model(args.model)
    if loaded.vectorizer is None or loaded.thresholds is None:
        raise DataError(
            f"{args.model} lacks an embedded vectorizer/thresholds; retrain with `infodemic train`"
        )
    texts = list(args.text or [])
    if not texts:
        raise ConfigError("predict needs at least one --text")
    standardize = loaded.model.spec.kind not in RAW_FEATURE_KINDS
    for text in texts:
        row = extract_features(_bare_record(text), loaded.thresholds)
        vec = transform(row, loaded.vectorizer, standardize)
        label = predict(loaded.model, vec)
        score = decision_score(loaded.model, vec)
        print(f"{label} {score:.6f}")
    return 0


def cmd_model_inspect(args: argparse.Namespace) -> int:
    header = read_header(args.model)
    view = {
        key: header.get(key)
        for key in (
            "schema",
            "kind",
            "hyperparameters",
            "seed",
            "vectorizer_fingerprint",
            "created_at",
            "n_sparse",
            "n_dense",
            "n_trees",
            "scalars",
        )
    }
    view["arrays"] = [
        {"name": a["name"], "dtype": a["dtype"], "shape": a["shape"]}
        for a in header["arrays"]
    ]
    view["has_vectorizer"] = header.get("vectorizer") is not None
    view["has_thresholds"] = header.get("thresholds") is not None
    print(json.dumps(view, sort_keys=True, indent=2))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    path = Path(args.report)
    if not path.is_file():
        raise DataError(f"report not found: {path}; run `infodemic evaluate` first")
    report = report_from_json(path.read_text(encoding="utf-8"))
    rendered = render_report(report, args.format)
    if args.out_file:
        Path(args.out_file).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.out_file}")
    else:
        print(rendered, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="pipeline config (TOML)")
    common.add_argument("--seed", type=int, help="override the master seed")
    common.add_argument("--jobs", type=int, help="parallelism cap for stages that support it")
    common.add_argument("--out", help="override the output directory")

    parser = argparse.ArgumentParser(
        prog="infodemic",
        description="Tweet misinformation classification pipeline",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb")

    sub.add_parser("hydrate", parents=[common], help="resolve tweet IDs into a clean dataset").set_defaults(func=cmd_hydrate)
    sub.add_parser("prepare", parents=[common], help="extract the binarized feature table").set_defaults(func=cmd_prepare)
    sub.add_parser("balance", parents=[common], help="rebalance classes; write kept/removed row lists").set_defaults(func=cmd_balance)
    sub.add_parser("train", parents=[common], help="train all configured models on the balanced data").set_defaults(func=cmd_train)
    sub.add_parser("evaluate", parents=[common], help="run repeated stratified cross-validation and write reports").set_defaults(func=cmd_evaluate)

    p_predict = sub.add_parser("predict", parents=[common], help="score raw text with a trained model")
    p_predict.add_argument("--model", required=True, help="model file from `infodemic train`")
    p_predict.add_argument("--text", action="append", help="text to score (repeatable)")
    p_predict.set_defaults(func=cmd_predict)

    p_model = sub.add_parser("model", parents=[common], help="model file utilities")
    model_sub = p_model.add_subparsers(dest="model_verb")
    p_inspect = model_sub.add_parser("inspect", parents=[common], help="dump a model container header")
    p_inspect.add_argument("--model", required=True)
    p_inspect.set_defaults(func=cmd_model_inspect)

    p_report = sub.add_parser("report", parents=[common], help="re-render a report.json")
    p_report.add_argument("--report", required=True, help="path to report.json")
    p_report.add_argument("--format", default="markdown", choices=["json", "markdown", "csv"])
    p_report.add_argument("--out-file", help="write here instead of stdout")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    func = getattr(args, "func", None)
    if func is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfodemicError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort mapping
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
