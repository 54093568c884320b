"""Acceptance suite: every criterion as one test, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s``. The end-to-end
criteria drive the installed CLI against the bundled planted-signal
corpus in fixture mode, twice, to also check byte-level determinism.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from infodemic.balance import (
    BalanceConfig,
    IndexedPoint,
    MAJORITY,
    MINORITY,
    one_sided_selection,
)
from infodemic.cli import main as cli_main
from infodemic.corpus import write_records
from infodemic.evaluate import (
    ConfusionMatrix,
    EvaluationReport,
    Metrics,
    ModelResult,
    confusion,
    cross_validate,
    metrics,
    one_sample_ttest,
    render_report,
    stratified_kfold,
)
from infodemic.models import (
    ModelSpec,
    logreg_gradient,
    logreg_loss,
    predict_all,
    train_linear_svm,
    train_mnb,
    train_random_forest,
)
from infodemic.preprocess import FeatureRow
from infodemic.synthetic import make_synthetic_corpus, write_index_for
from infodemic.vectorize import CombinedVector, fit, transform

from conftest import make_record
from oracles import metrics_oracle, oss_oracle, tfidf_oracle


def ok(n, message):
    print(f"PASS  criterion {n}: {message}")


BENCHMARK_CONFIG = """
[paths]
index = "{index}"
fixture = "{fixture}"
out = "{out}"

[hydration]
mode = "fixture"

[vectorize]
token_cap = 5000

[balance]
method = "oss"
target_minority_fraction = 0.30

[evaluate]
k = 5
repeats = 1

[run]
seed = 20200501

[[models]]
kind = "mnb"

[[models]]
kind = "logreg"

[[models]]
kind = "linear_svm"

[[models]]
kind = "random_forest"
"""


@pytest.fixture(scope="module")
def benchmark_runs(tmp_path_factory):
    """Run the full pipeline twice with the same master seed; report both
    output directories plus the first run's wall time."""
    root = tmp_path_factory.mktemp("bench")
    records = make_synthetic_corpus(n=2000, seed=7)
    fixture = root / "fixture.ndjson"
    index = root / "index.csv"
    write_records(records, fixture)
    write_index_for(records, index)

    runs = []
    for name in ("run_a", "run_b"):
        out = root / name
        config = root / f"{name}.toml"
        config.write_text(
            BENCHMARK_CONFIG.format(index=index, fixture=fixture, out=out),
            encoding="utf-8",
        )
        start = time.perf_counter()
        code = cli_main(["evaluate", "--config", str(config)])
        elapsed = time.perf_counter() - start
        assert code == 0
        runs.append({"out": out, "elapsed": elapsed})
    return runs


def test_criterion_01_tfidf_oracle():
    rng = random.Random(20200501)
    start = time.perf_counter()
    for trial in range(50):
        n_docs = rng.randrange(1, 21)
        vocab = [f"t{i}" for i in range(rng.randrange(1, 51))]
        docs = [
            " ".join(rng.choice(vocab) for _ in range(rng.randrange(0, 40)))
            for _ in range(n_docs)
        ]
        cap = rng.choice([2, 5, 25, 50, 5000])
        rows = [FeatureRow(d, 0, 0, 0, 0, 0, 0, 0, 0) for d in docs]
        v = fit(rows, cap=cap)
        vocab_o, idf_o, weights_o = tfidf_oracle(docs, cap)
        assert dict(v.vocabulary.index) == vocab_o, f"trial {trial}"
        for term, col in v.vocabulary.index.items():
            assert abs(float(v.idf[col]) - idf_o[term]) <= 1e-9
        for row, expected in zip(rows, weights_o):
            got = dict(transform(row, v).sparse)
            assert set(got) == set(expected)
            for col, weight in expected.items():
                assert abs(got[col] - weight) <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    ok(1, f"TF-IDF fit+transform matches brute force on 50 corpora in {elapsed:.2f}s")


def test_criterion_02_oss_oracle():
    start = time.perf_counter()
    checks = 0
    for seed in range(20):
        rng = np.random.default_rng(20200500 + seed)
        n = int(rng.integers(4, 61))
        dim = int(rng.integers(2, 9))
        n_minority = int(rng.integers(1, max(2, n // 3)))
        vectors = rng.normal(size=(n, dim))
        if seed % 4 == 0:
            vectors = np.round(vectors, 1)  # provoke distance ties
        points = [
            IndexedPoint(i, vectors[i], MINORITY if i < n_minority else MAJORITY)
            for i in range(n)
        ]
        for metric in ("euclidean", "cosine"):
            got = one_sided_selection(points, BalanceConfig(distance=metric, seed=0))
            expected = oss_oracle(
                [(p.row_index, list(p.vector), p.cls == MINORITY) for p in points],
                metric,
            )
            assert got == expected, f"seed {seed} metric {metric}"
            checks += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    ok(2, f"one-sided selection matches exhaustive 1-NN/Tomek on {checks} instance runs in {elapsed:.2f}s")


def test_criterion_03_metrics_oracle():
    rng = random.Random(33)
    for _ in range(100):
        tp, fp, fn, tn = (rng.randrange(0, 200) for _ in range(4))
        if tp + fp + fn + tn == 0:
            tn = 1
        m = metrics(ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn))
        assert (m.accuracy, m.precision, m.recall, m.f1) == metrics_oracle(tp, fp, fn, tn)
    worked = metrics(ConfusionMatrix(tp=88, fp=8, fn=12, tn=92))
    assert worked.accuracy == pytest.approx(0.90, abs=1e-12)
    assert worked.precision == pytest.approx(0.9167, abs=1e-4)
    assert worked.recall == pytest.approx(0.88, abs=1e-12)
    assert worked.f1 == pytest.approx(0.8979, abs=1e-4)
    ok(3, "metrics match direct formulas on 100 random matrices and the worked example")


def test_criterion_04_mnb_closed_form():
    # fake doc "cure covid", real doc "mask works"; columns cure,covid,mask,works
    data = [
        CombinedVector(sparse=[(0, 1.0), (1, 1.0)], dense=np.zeros(0), label=1),
        CombinedVector(sparse=[(2, 1.0), (3, 1.0)], dense=np.zeros(0), label=0),
    ]
    model = train_mnb(data, alpha=1.0, n_sparse=4, n_dense=0)
    logp = model.params["feature_log_prob"]
    expected = {
        (1, 0): 1 / 3, (1, 1): 1 / 3, (1, 2): 1 / 6, (1, 3): 1 / 6,
        (0, 0): 1 / 6, (0, 1): 1 / 6, (0, 2): 1 / 3, (0, 3): 1 / 3,
    }
    for (c, j), p in expected.items():
        assert abs(math.exp(logp[c][j]) - p) <= 1e-12
    cure = CombinedVector(sparse=[(0, 1.0)], dense=np.zeros(0), label=1)
    assert predict_all(model, [cure]) == [1]
    ok(4, "MNB likelihoods equal hand-computed values to 1e-12 and predict('cure') = fake")


def test_criterion_05_logreg_gradient_check():
    rng = np.random.default_rng(55)
    h = 1e-5
    for instance in range(20):
        n, d = int(rng.integers(1, 10)), int(rng.integers(1, 7))
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n).astype(np.float64)
        w = rng.normal(size=d)
        b = float(rng.normal())
        lam = float(rng.uniform(0.0, 0.1))
        grad_w, grad_b = logreg_gradient(w, b, X, y, lam)
        for j in range(d):
            wp, wm = w.copy(), w.copy()
            wp[j] += h
            wm[j] -= h
            numeric = (logreg_loss(wp, b, X, y, lam) - logreg_loss(wm, b, X, y, lam)) / (2 * h)
            rel = abs(numeric - grad_w[j]) / max(1.0, abs(numeric))
            assert rel <= 1e-5, f"instance {instance} coord {j}"
        numeric_b = (logreg_loss(w, b + h, X, y, lam) - logreg_loss(w, b - h, X, y, lam)) / (2 * h)
        assert abs(numeric_b - grad_b) / max(1.0, abs(numeric_b)) <= 1e-5
    ok(5, "logistic gradient matches central differences (rel err <= 1e-5) on 20 instances")


def test_criterion_06_separable_convergence():
    rng = np.random.default_rng(66)
    svm_data = []
    for i in range(200):
        label = i % 2
        center = 1.0 if label else -1.0
        point = center + rng.uniform(-0.3, 0.3, size=2)  # inter-class margin > 0.5
        svm_data.append(
            CombinedVector(sparse=list(enumerate(point)), dense=np.zeros(0), label=label)
        )
    svm = train_linear_svm(svm_data, C=1.0, epochs=50, seed=6)
    assert predict_all(svm, svm_data) == [v.label for v in svm_data]

    forest_data = []
    for _ in range(200):
        label = int(rng.integers(0, 2))
        sparse = [(0, float(label))] + [(j, float(rng.normal())) for j in (1, 2, 3)]
        forest_data.append(CombinedVector(sparse=sparse, dense=np.zeros(0), label=label))
    forest = train_random_forest(forest_data, n_trees=20, seed=11)
    assert predict_all(forest, forest_data) == [v.label for v in forest_data]
    ok(6, "SVM hits training accuracy 1.0 in 50 epochs; forest hits 1.0 on pure signal")


def test_criterion_07_stratification():
    rng = random.Random(77)
    for _ in range(1000):
        k = rng.randrange(2, 8)
        n1 = rng.randrange(k, 60)
        n0 = rng.randrange(k, 60)
        labels = [1] * n1 + [0] * n0
        rng.shuffle(labels)
        folds = stratified_kfold(labels, k=k, seed=rng.randrange(10**9))
        flat = sorted(i for fold in folds for i in fold)
        assert flat == list(range(len(labels)))
        for fold in folds:
            for cls, total in ((1, n1), (0, n0)):
                count = sum(1 for i in fold if labels[i] == cls)
                assert abs(count - total / k) < 1.0 + 1e-9
    ok(7, "folds partition indices with per-class counts within 1 of proportional (1000 trials)")


def test_criterion_08_leakage_sentinel():
    records = [
        make_record(
            tweet_id=str(i),
            text=f"shared background words uniquetoken{i}",
            label=i % 2,
            account_age_days=float(50 + i),
            retweet_count=i % 7,
        )
        for i in range(40)
    ]
    contexts = []
    cross_validate(
        ModelSpec(kind="mnb", seed=1),
        records,
        k=5,
        repeats=3,
        seed=8,
        balance=BalanceConfig(seed=2, text_dim=16),
        collect=contexts.append,
    )
    assert len(contexts) == 15
    for ctx in contexts:
        vocabulary = ctx.vectorizer.vocabulary.index
        for j in ctx.test_indices:
            assert f"uniquetoken{j}" not in vocabulary, (ctx.repeat, ctx.fold, j)
    ok(8, "test-fold sentinel tokens never enter that fold's vocabulary (15 fold fits)")


def test_criterion_09_planted_signal_end_to_end(benchmark_runs):
    run = benchmark_runs[0]
    report = json.loads((run["out"] / "report.json").read_text(encoding="utf-8"))
    rows = {m["kind"]: m for m in report["models"]}
    assert set(rows) == {"mnb", "logreg", "linear_svm", "random_forest"}
    for kind, row in rows.items():
        assert len(row["folds"]) == 5, f"{kind} incomplete"

    svm_mean = rows["linear_svm"]["mean"]
    assert svm_mean["accuracy"] >= 0.90, f"svm accuracy {svm_mean['accuracy']:.4f}"

    # Majority-class baseline on the same folds: never flags anything, so its
    # fake-class F1 is 0; accuracy cannot separate a detector from the
    # majority guesser at 10:90, F1 can (see decisions ledger).
    baseline = metrics(confusion([0] * 2000, [r.label for r in make_synthetic_corpus(n=2000, seed=7)][:2000]))
    assert svm_mean["f1"] - baseline.f1 >= 0.15

    assert run["elapsed"] < 60.0, f"pipeline took {run['elapsed']:.1f}s"
    ok(
        9,
        f"end-to-end SVM accuracy {svm_mean['accuracy']:.3f} (>= 0.90), F1 beats "
        f"majority baseline by {svm_mean['f1'] - baseline.f1:.3f} (>= 0.15), "
        f"4 kinds complete in {run['elapsed']:.1f}s",
    )


def test_criterion_10_paper_shape_report():
    published = Metrics(accuracy=0.93, precision=0.92, recall=0.88, f1=0.90)
    report = EvaluationReport(
        models=[ModelResult(display="SVM", kind="linear_svm", folds=[published], mean=published)],
        k=1,
        repeats=1,
    )
    text = render_report(report, "markdown")
    lines = text.splitlines()
    assert lines[0] == "Model | Accuracy | Precision | Recall | F1-Score"
    assert "SVM | 0.93 | 0.92 | 0.88 | 0.90" in lines
    ok(10, "published fold means render the exact row 'SVM | 0.93 | 0.92 | 0.88 | 0.90'")


def test_criterion_11_ttest():
    values = [0.92] * 15 + [0.94] * 15
    result = one_sample_ttest(values, mu0=0.93, alpha=0.05)
    assert result.n == 30
    assert result.critical_value == 2.045
    assert abs(result.t_statistic) < 1e-9
    assert not result.reject_null

    rng = random.Random(11)
    for _ in range(100):
        n = rng.randrange(2, 60)
        base = [rng.gauss(0.9, 0.04) for _ in range(n)]
        if min(base) == max(base):
            base[0] += 0.01
        mu0 = rng.gauss(0.9, 0.04)
        first = one_sample_ttest(base, mu0=mu0)
        sign = 1.0 if first.sample_mean >= mu0 else -1.0
        delta = sign * rng.uniform(0.005, 0.6)  # same shift for all: s, n fixed
        second = one_sample_ttest([v + delta for v in base], mu0=mu0)
        if first.reject_null:
            assert second.reject_null
    ok(11, "symmetric 30-sample accepts H0 at df=29 crit 2.045; decision monotone over 100 shifts")


def test_criterion_12_determinism(benchmark_runs):
    a = (benchmark_runs[0]["out"] / "report.json").read_bytes()
    b = (benchmark_runs[1]["out"] / "report.json").read_bytes()
    assert a == b
    ok(12, "two same-seed pipeline runs produce byte-identical report.json")
