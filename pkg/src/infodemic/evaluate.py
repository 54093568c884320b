"""Stratified cross-validation, the four headline metrics, and reporting.

Every fold refits thresholds, rebalancing, and the vectorizer on its
training split alone, so nothing fitted ever sees a held-out row. The
positive class for precision/recall/F1 is fake (label 1). Repeated CV
(k folds x r repeats, default 5 x 6 = 30 measurements) feeds a fixed-
alpha one-sample t-test of mean accuracy against a hypothesized value.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .balance import BalanceConfig, rebalance
from .corpus import TweetRecord
from .errors import DataError
from .models import (
    ModelSpec,
    RAW_FEATURE_KINDS,
    TrainedModel,
    display_name,
    predict_all,
    train,
)
from .preprocess import (
    DEFAULT_WORD_COUNT_THRESHOLD,
    Thresholds,
    extract_all,
    fit_thresholds,
    numeric_fields,
)
from .seeds import derive_seed
from .ttable import critical_value
from .vectorize import DEFAULT_TOKEN_CAP, Vectorizer, fingerprint, fit, transform_all

REPORT_SCHEMA = "infodemic.report/1"

METRIC_NAMES = ("accuracy", "precision", "recall", "f1")


@dataclass(frozen=True, slots=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True, slots=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


@dataclass(frozen=True, slots=True)
class TTestResult:
    n: int
    sample_mean: float
    sample_stddev: float
    mu0: float
    t_statistic: float
    alpha: float
    critical_value: float
    reject_null: bool


@dataclass(slots=True)
class ModelResult:
    """One table row: a trained kind with per-fold metrics, or an
    externally supplied result (mean only, e.g. deep baselines)."""

    display: str
    kind: str | None = None
    folds: list[Metrics] = field(default_factory=list)
    mean: Metrics | None = None
    external: bool = False


@dataclass(slots=True)
class EvaluationReport:
    models: list[ModelResult]
    provenance: str = ""
    config: dict = field(default_factory=dict)
    k: int = 0
    repeats: int = 0
    ttest: TTestResult | None = None


@dataclass(slots=True)
class FoldContext:
    """Everything fitted for one (repeat, fold) cell; handed to the
    optional collect callback for audits such as leakage checks."""

    repeat: int
    fold: int
    train_indices: list[int]
    test_indices: list[int]
    kept_train_positions: list[int]
    thresholds: Thresholds
    vectorizer: Vectorizer
    model: TrainedModel
    metrics: Metrics


def stratified_kfold(labels: Sequence[int], k: int = 5, seed: int = 0) -> list[list[int]]:
    """Partition indices into k test folds preserving class proportions.

    Per class: seeded shuffle, then round-robin assignment, so per-fold
    class counts stay within 1 of class_total/k.
    """
    if k < 2:
        raise DataError("stratified_kfold needs k >= 2")
    classes = sorted(set(labels))
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in classes:
        indices = np.array([i for i, y in enumerate(labels) if y == cls], dtype=np.int64)
        if len(indices) < k:
            raise DataError(f"class {cls!r} has {len(indices)} members, fewer than k={k}")
        rng.shuffle(indices)
        for j in range(k):
            folds[j].extend(int(i) for i in indices[j::k])
    return [sorted(fold) for fold in folds]


def confusion(predicted: Sequence[int], actual: Sequence[int]) -> ConfusionMatrix:
    """Standard cell counts with fake (1) as the positive class."""
    if len(predicted) != len(actual):
        raise DataError(f"length mismatch: {len(predicted)} predictions vs {len(actual)} labels")
    if not predicted:
        raise DataError("confusion matrix needs at least one row")
    tp = fp = fn = tn = 0
    for p, a in zip(predicted, actual):
        if p == 1 and a == 1:
            tp += 1
        elif p == 1 and a == 0:
            fp += 1
        elif p == 0 and a == 1:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def metrics(cm: ConfusionMatrix) -> Metrics:
    """Accuracy, precision, recall, F1 with zero-denominator conventions."""
    if cm.total == 0:
        raise DataError("cannot compute metrics of an empty confusion matrix")
    accuracy = (cm.tp + cm.tn) / cm.total
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp > 0 else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Metrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1)


def mean_metrics(folds: Sequence[Metrics]) -> Metrics:
    if not folds:
        raise DataError("cannot average zero folds")
    return Metrics(
        **{
            name: math.fsum(getattr(m, name) for m in folds) / len(folds)
            for name in METRIC_NAMES
        }
    )


def cross_validate(
    spec: ModelSpec,
    records: Sequence[TweetRecord],
    k: int = 5,
    repeats: int = 1,
    seed: int = 0,
    word_count_threshold: int = DEFAULT_WORD_COUNT_THRESHOLD,
    token_cap: int = DEFAULT_TOKEN_CAP,
    balance: BalanceConfig | None = None,
    include_retweet: bool = True,
    collect: Callable[[FoldContext], None] | None = None,
) -> list[Metrics]:
    """Run repeated stratified CV for one model spec.

    For each repeat r and fold i, thresholds, rebalancing, and the
    vectorizer are fitted on the training split only; the held-out
    split is never balanced. Returns k*repeats Metrics in (repeat,
    fold) order; fold assignment reshuffles per repeat with a seed
    derived from (seed, repeat).
    """
    labels = [r.label for r in records]
    results: list[Metrics] = []
    for r in range(repeats):
        folds = stratified_kfold(labels, k=k, seed=derive_seed(seed, "folds", r))
        for i, test_idx in enumerate(folds):
            try:
                results.append(
                    _run_fold(
                        spec, records, r, i, test_idx,
                        word_count_threshold=word_count_threshold,
                        token_cap=token_cap,
                        balance=balance,
                        include_retweet=include_retweet,
                        collect=collect,
                    )
                )
            except DataError as exc:
                raise DataError(f"repeat {r}, fold {i}: {exc}") from exc
    return results


def _run_fold(
    spec: ModelSpec,
    records: Sequence[TweetRecord],
    r: int,
    i: int,
    test_idx: list[int],
    word_count_threshold: int,
    token_cap: int,
    balance: BalanceConfig | None,
    include_retweet: bool,
    collect: Callable[[FoldContext], None] | None,
) -> Metrics:
    test_set = set(test_idx)
    train_idx = [j for j in range(len(records)) if j not in test_set]
    train_records = [records[j] for j in train_idx]

    thresholds = fit_thresholds(
        train_records, word_count_threshold, fitted_on=f"repeat{r}/fold{i}"
    )
    train_rows = extract_all(train_records, thresholds)

    if balance is not None and balance.method != "none":
        fold_balance = replace(balance, seed=derive_seed(balance.seed, "balance", r, i))
        kept = rebalance(train_rows, fold_balance, include_retweet=include_retweet)
    else:
        kept = list(range(len(train_rows)))
    kept_rows = [train_rows[j] for j in kept]

    vectorizer = fit(kept_rows, cap=token_cap, numeric_field_names=numeric_fields(include_retweet))
    standardize = spec.kind not in RAW_FEATURE_KINDS
    train_vectors = transform_all(kept_rows, vectorizer, standardize)

    fold_spec = replace(spec, seed=derive_seed(spec.seed, "model", r, i))
    model = train(
        fold_spec,
        train_vectors,
        n_sparse=vectorizer.n_sparse,
        n_dense=vectorizer.n_dense,
        vectorizer_fingerprint=fingerprint(vectorizer),
    )

    test_rows = extract_all((records[j] for j in test_idx), thresholds)
    test_vectors = transform_all(test_rows, vectorizer, standardize)
    predicted = predict_all(model, test_vectors)
    fold_metrics = metrics(confusion(predicted, [records[j].label for j in test_idx]))

    if collect is not None:
        collect(
            FoldContext(
                repeat=r,
                fold=i,
                train_indices=train_idx,
                test_indices=list(test_idx),
                kept_train_positions=kept,
                thresholds=thresholds,
                vectorizer=vectorizer,
                model=model,
                metrics=fold_metrics,
            )
        )
    return fold_metrics


def one_sample_ttest(
    values: Sequence[float], mu0: float = 0.93, alpha: float = 0.05
) -> TTestResult:
    """Two-tailed one-sample t-test against a table critical value.

    Zero spread is decided exactly: accept iff the (constant) sample
    equals mu0, otherwise reject with an infinite statistic.
    """
    n = len(values)
    if n < 2:
        raise DataError("one_sample_ttest needs at least 2 values")
    if min(values) == max(values):
        mean = values[0]
        s = 0.0
        if mean == mu0:
            t = 0.0
        else:
            t = math.inf if mean > mu0 else -math.inf
    else:
        mean = math.fsum(values) / n
        s = statistics.stdev(values)
        t = (mean - mu0) / (s / math.sqrt(n))
    crit = critical_value(n - 1, alpha)
    return TTestResult(
        n=n,
        sample_mean=float(mean),
        sample_stddev=float(s),
        mu0=mu0,
        t_statistic=float(t),
        alpha=alpha,
        critical_value=crit,
        reject_null=abs(t) > crit,
    )


def build_report(
    results: Sequence[tuple[ModelSpec, Sequence[Metrics]]],
    k: int,
    repeats: int,
    provenance: str = "",
    config: dict | None = None,
    mu0: float = 0.93,
    alpha: float = 0.05,
    ttest_kind: str | None = "linear_svm",
    external: Sequence[tuple[str, Metrics]] = (),
) -> EvaluationReport:
    """Assemble per-model fold metrics (plus optional externally supplied
    rows) into a report; the t-test runs on the named kind's accuracies."""
    models = [
        ModelResult(
            display=display_name(spec.kind),
            kind=spec.kind,
            folds=list(folds),
            mean=mean_metrics(folds),
        )
        for spec, folds in results
    ]
    models.extend(
        ModelResult(display=name, kind=None, folds=[], mean=m, external=True)
        for name, m in external
    )
    ttest = None
    if ttest_kind is not None:
        for spec, folds in results:
            if spec.kind == ttest_kind and len(folds) >= 2:
                ttest = one_sample_ttest([m.accuracy for m in folds], mu0=mu0, alpha=alpha)
                break
    return EvaluationReport(
        models=models,
        provenance=provenance,
        config=dict(config or {}),
        k=k,
        repeats=repeats,
        ttest=ttest,
    )


# --- rendering ----------------------------------------------------------------


def render_report(report: EvaluationReport, format: str) -> str:
    if not report.models:
        raise DataError("report has no model rows")
    if format == "json":
        return report_to_json(report)
    if format == "markdown":
        return _render_markdown(report)
    if format == "csv":
        return _render_csv(report)
    raise DataError(f"unknown report format {format!r}; expected json, markdown, or csv")


def _render_markdown(report: EvaluationReport) -> str:
    lines = ["Model | Accuracy | Precision | Recall | F1-Score"]
    lines.append("----- | -------- | --------- | ------ | --------")
    for row in report.models:
        m = row.mean
        lines.append(
            f"{row.display} | {m.accuracy:.2f} | {m.precision:.2f} | {m.recall:.2f} | {m.f1:.2f}"
        )
    if report.ttest is not None:
        t = report.ttest
        verdict = "rejected" if t.reject_null else "accepted"
        lines.append("")
        lines.append(
            f"Mean-accuracy t-test: n={t.n}, mean={t.sample_mean:.4f}, mu0={t.mu0}, "
            f"t={t.t_statistic:.4f}, critical={t.critical_value} (alpha={t.alpha}): "
            f"null hypothesis {verdict}."
        )
    return "\n".join(lines) + "\n"


def _render_csv(report: EvaluationReport) -> str:
    lines = ["model,repeat,fold,accuracy,precision,recall,f1"]
    for row in report.models:
        k = report.k if report.k > 0 else max(1, len(row.folds))
        for idx, m in enumerate(row.folds):
            lines.append(
                f"{row.kind or row.display},{idx // k},{idx % k},"
                f"{m.accuracy!r},{m.precision!r},{m.recall!r},{m.f1!r}"
            )
    return "\n".join(lines) + "\n"


def report_to_json(report: EvaluationReport) -> str:
    doc = {
        "schema": REPORT_SCHEMA,
        "provenance": report.provenance,
        "config": report.config,
        "k": report.k,
        "repeats": report.repeats,
        "models": [
            {
                "display": row.display,
                "kind": row.kind,
                "external": row.external,
                "folds": [m.as_dict() for m in row.folds],
                "mean": row.mean.as_dict() if row.mean else None,
            }
            for row in report.models
        ],
        "ttest": (
            {
                "n": report.ttest.n,
                "sample_mean": report.ttest.sample_mean,
                "sample_stddev": report.ttest.sample_stddev,
                "mu0": report.ttest.mu0,
                "t_statistic": report.ttest.t_statistic,
                "alpha": report.ttest.alpha,
                "critical_value": report.ttest.critical_value,
                "reject_null": report.ttest.reject_null,
            }
            if report.ttest
            else None
        ),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> EvaluationReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid report JSON: {exc}") from exc
    if doc.get("schema") != REPORT_SCHEMA:
        raise DataError(f"unsupported report schema: {doc.get('schema')!r}")
    models = [
        ModelResult(
            display=row["display"],
            kind=row.get("kind"),
            folds=[Metrics(**m) for m in row.get("folds", [])],
            mean=Metrics(**row["mean"]) if row.get("mean") else None,
            external=bool(row.get("external", False)),
        )
        for row in doc["models"]
    ]
    ttest = TTestResult(**doc["ttest"]) if doc.get("ttest") else None
    return EvaluationReport(
        models=models,
        provenance=doc.get("provenance", ""),
        config=doc.get("config", {}),
        k=int(doc.get("k", 0)),
        repeats=int(doc.get("repeats", 0)),
        ttest=ttest,
    )
