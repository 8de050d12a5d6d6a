"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines for
passing criteria too. The two real-dataset criteria skip (with
instructions) when the public data / exported embeddings are not present;
see README for how to supply them.
"""

import itertools
import json
import os
import struct
import time
from pathlib import Path

import numpy as np
import pytest

from embtopics.cli import main as cli_main
from embtopics.embio import EmbeddingMatrix, EmbIOError, load_embeddings, save_embeddings
from embtopics.ingest import Corpus, Example
from embtopics.kmeans import KMeansConfig, kmeans_fit
from embtopics.logreg import loss_and_grad
from embtopics.metrics import accuracy, macro_f1
from embtopics.pipeline import run_evaluate
from embtopics.report import render_tables
from embtopics.rng import derive_rng

# Published per-dataset scores (model -> clusters F1, clusters acc,
# logreg F1, logreg acc) and the cross-dataset two-decimal averages.
AMAZON_TABLE = {
    "SBERT": (0.225, 0.263, 0.586, 0.586),
    "USE": (0.321, 0.345, 0.618, 0.618),
    "DeCLUTR": (0.239, 0.276, 0.613, 0.612),
    "LASER": (0.087, 0.113, 0.438, 0.446),
    "TfidfVectorizer": (0.088, 0.107, 0.605, 0.604),
}
NEWS_TABLE = {
    "SBERT": (0.212, 0.247, 0.472, 0.475),
    "USE": (0.256, 0.286, 0.511, 0.515),
    "DeCLUTR": (0.206, 0.243, 0.506, 0.508),
    "LASER": (0.112, 0.138, 0.398, 0.402),
    "TfidfVectorizer": (0.058, 0.075, 0.486, 0.487),
}
AVERAGED_TWO_DP = {
    "SBERT": ("0.22", "0.53"),
    "USE": ("0.29", "0.56"),
    "DeCLUTR": ("0.22", "0.56"),
    "LASER": ("0.10", "0.42"),
    "TfidfVectorizer": ("0.07", "0.55"),
}


def _pass(name):
    print(f"[ACCEPTANCE] {name}: PASS")


# ----------------------------------------------------------------------
# 1. Metric oracle equivalence
# ----------------------------------------------------------------------

def _oracle_scores(y_true, y_pred, labels):
    f1s = []
    for c in labels:
        tp = sum(t == c and p == c for t, p in zip(y_true, y_pred))
        fp = sum(t != c and p == c for t, p in zip(y_true, y_pred))
        fn = sum(t == c and p != c for t, p in zip(y_true, y_pred))
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1s.append(2 * precision * recall / (precision + recall) if precision + recall else 0.0)
    acc = sum(t == p for t, p in zip(y_true, y_pred)) / len(y_true)
    return sum(f1s) / len(f1s), acc


def test_metric_oracle_equivalence():
    for trial in range(100):
        rng = derive_rng(2024, "metrics", trial)
        n_classes = int(rng.integers(1, 6))
        labels = [f"c{i}" for i in range(n_classes)]
        n = int(rng.integers(1, 31))
        y_true = [labels[i] for i in rng.integers(0, n_classes, size=n)]
        y_pred = [labels[i] for i in rng.integers(0, n_classes, size=n)]
        want_f1, want_acc = _oracle_scores(y_true, y_pred, labels)
        assert abs(macro_f1(y_true, y_pred, labels) - want_f1) <= 1e-12
        assert abs(accuracy(y_true, y_pred) - want_acc) <= 1e-12
    got = macro_f1(["A", "A", "B", "B"], ["A", "B", "B", "B"], ["A", "B"])
    assert abs(got - (2 / 3 + 4 / 5) / 2) <= 1e-9
    assert abs(got - 0.73333) <= 5e-6
    _pass("metric oracle equivalence (100 random instances, 1e-12)")


# ----------------------------------------------------------------------
# 2. k-means optimality at desk scale
# ----------------------------------------------------------------------

def _exhaustive_optimum(X, k):
    """Minimum inertia over every assignment of rows to k clusters."""
    n, _ = X.shape
    assigns = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)
    onehot = (assigns[:, :, None] == np.arange(k)).astype(np.float64)
    counts = onehot.sum(axis=1)  # P x k
    sums = np.einsum("pnk,nd->pkd", onehot, X)
    safe = np.where(counts > 0, counts, 1.0)
    means_sq = (sums**2).sum(axis=2) / safe  # counts_j * ||mu_j||^2
    inertia = (X**2).sum() - np.where(counts > 0, means_sq, 0.0).sum(axis=1)
    return float(inertia.min())


def test_kmeans_desk_scale_optimality():
    start = time.perf_counter()
    trials = 200
    hits = 0
    for trial in range(trials):
        rng = derive_rng(2024, "desk-scale", trial)
        k = int(rng.integers(1, 4))
        n = int(rng.integers(k, 9))
        d = int(rng.integers(1, 4))
        X = rng.normal(scale=float(rng.uniform(0.5, 3.0)), size=(n, d))
        result = kmeans_fit(X, KMeansConfig(k=k, n_init=20, seed=trial))
        optimum = _exhaustive_optimum(X, k)
        assert result.inertia >= optimum - 1e-9
        if result.inertia <= optimum + 1e-9 * max(1.0, optimum):
            hits += 1
        for trace in result.restart_inertia_traces:
            trace = np.asarray(trace)
            violations = np.diff(trace) > 1e-10 * np.maximum(1.0, trace[:-1])
            assert not violations.any(), f"inertia increased within a restart: {trace}"
    elapsed = time.perf_counter() - start
    assert hits >= 0.95 * trials, f"optimal in {hits}/{trials} trials"
    assert elapsed < 10.0, f"took {elapsed:.1f}s"
    _pass(f"k-means desk-scale optimality ({hits}/{trials} optimal, "
          f"zero monotonicity violations, {elapsed:.1f}s)")


# ----------------------------------------------------------------------
# 3. Logistic-regression gradient check
# ----------------------------------------------------------------------

def test_logreg_gradient_check():
    start = time.perf_counter()
    h = 1e-5
    for trial in range(20):
        rng = derive_rng(2024, "gradcheck", trial)
        n, d, C = int(rng.integers(4, 10)), int(rng.integers(2, 5)), int(rng.integers(2, 4))
        X = rng.normal(size=(n, d))
        y_idx = rng.integers(0, C, size=n)
        y_idx[:C] = np.arange(C)  # every class present
        W = rng.normal(scale=0.8, size=(C, d))
        b = rng.normal(scale=0.4, size=C)
        l2 = float(rng.uniform(0, 1e-2))
        _, gW, gb, _ = loss_and_grad(W, b, X, y_idx, l2)

        def J(Wv, bv):
            return loss_and_grad(Wv, bv, X, y_idx, l2)[0]

        fW = np.zeros_like(W)
        for i in range(C):
            for j in range(d):
                Wp, Wm = W.copy(), W.copy()
                Wp[i, j] += h
                Wm[i, j] -= h
                fW[i, j] = (J(Wp, b) - J(Wm, b)) / (2 * h)
        fb = np.zeros_like(b)
        for i in range(C):
            bp, bm = b.copy(), b.copy()
            bp[i] += h
            bm[i] -= h
            fb[i] = (J(W, bp) - J(W, bm)) / (2 * h)
        num = np.linalg.norm(gW - fW) + np.linalg.norm(gb - fb)
        den = max(np.linalg.norm(fW) + np.linalg.norm(fb), 1e-12)
        assert num / den < 1e-5, f"trial {trial}: relative error {num / den:.2e}"
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.1f}s"
    _pass(f"logreg analytic vs finite-difference gradients (20 instances, {elapsed:.1f}s)")


# ----------------------------------------------------------------------
# 4. Synthetic end-to-end
# ----------------------------------------------------------------------

def _blob_fixture(tmp_path, per_class=300, d=64, sigma=0.1, min_sep=5.0):
    rng = derive_rng(2024, "blobs")
    basis = np.linalg.qr(rng.normal(size=(d, d)))[0]
    centers = {label: basis[i] * 5.0 for i, label in enumerate(["alpha", "beta", "gamma"])}
    names = sorted(centers)
    for a, b in itertools.combinations(names, 2):
        assert np.linalg.norm(centers[a] - centers[b]) >= min_sep
    examples, rows = [], []
    for label in names:
        for i in range(per_class):
            examples.append(Example(f"{label}:{i}", label, f"{label} point {i}"))
            rows.append(rng.normal(scale=sigma, size=d) + centers[label])
    corpus = Corpus(examples=examples, labels=names)
    corpus_path = tmp_path / "blobs.tsv"
    corpus.write_tsv(corpus_path)
    emb_path = tmp_path / "blobs.bin"
    save_embeddings(EmbeddingMatrix(np.asarray(rows, np.float32), model_name="blobs64"), emb_path)
    return corpus_path, emb_path


def test_synthetic_end_to_end(tmp_path):
    start = time.perf_counter()
    corpus_path, emb_path = _blob_fixture(tmp_path)
    scores = {}
    for method in ("cluster", "logreg"):
        report = run_evaluate(
            corpus_path, emb_path, method,
            seed=7, eval_mode="split", test_fraction=0.2,
        )
        scores[method] = report.f1_macro
        assert report.f1_macro >= 0.95, f"{method} macro F1 {report.f1_macro:.3f}"
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    _pass(f"synthetic 3-blob end-to-end (cluster F1 {scores['cluster']:.3f}, "
          f"logreg F1 {scores['logreg']:.3f}, {elapsed:.1f}s)")


# ----------------------------------------------------------------------
# 5. TF-IDF replication on the public datasets (skips without the data)
# ----------------------------------------------------------------------

NEWS_ENV = "EMBTOPICS_NEWS_JSON"
AMAZON_ENV = "EMBTOPICS_AMAZON_DIR"


def _replicate_tfidf(tmp_path, corpus_path, table, dataset):
    t0 = time.perf_counter()
    cluster = run_evaluate(corpus_path, "tfidf", "cluster", seed=0, eval_mode="in-sample",
                           dataset=dataset)
    logreg = run_evaluate(corpus_path, "tfidf", "logreg", seed=0, eval_mode="in-sample",
                          dataset=dataset)
    elapsed = time.perf_counter() - t0
    want_cf1, want_cacc, want_lf1, _ = table["TfidfVectorizer"]
    assert abs(cluster.f1_macro - want_cf1) <= 0.04, (
        f"{dataset} clusters F1 {cluster.f1_macro:.3f} vs published {want_cf1}")
    if dataset == "news":
        assert abs(cluster.accuracy - want_cacc) <= 0.04, (
            f"{dataset} clusters acc {cluster.accuracy:.3f} vs published {want_cacc}")
    assert abs(logreg.f1_macro - want_lf1) <= 0.06, (
        f"{dataset} logreg F1 {logreg.f1_macro:.3f} vs published {want_lf1}")
    assert elapsed < 900.0, f"{dataset} replication took {elapsed:.0f}s"
    return cluster.f1_macro, logreg.f1_macro, elapsed


def test_tfidf_replication_news(tmp_path):
    news_json = os.environ.get(NEWS_ENV)
    if not news_json or not Path(news_json).exists():
        pytest.skip(f"set {NEWS_ENV} to the news-category jsonl file to run this criterion")
    corpus_path = tmp_path / "news.tsv"
    rc = cli_main(["ingest", "news", "--input", news_json, "--per-class", "1000",
                   "--seed", "0", "--out", str(corpus_path)])
    assert rc == 0
    cf1, lf1, elapsed = _replicate_tfidf(tmp_path, corpus_path, NEWS_TABLE, "news")
    _pass(f"tf-idf replication news (clusters F1 {cf1:.3f}~0.058, "
          f"logreg F1 {lf1:.3f}~0.486, {elapsed:.0f}s)")


def test_tfidf_replication_amazon(tmp_path):
    amazon_dir = os.environ.get(AMAZON_ENV)
    if not amazon_dir or not Path(amazon_dir).is_dir():
        pytest.skip(f"set {AMAZON_ENV} to a directory of per-category review jsonl(.gz) files")
    files = sorted(
        p for p in Path(amazon_dir).iterdir()
        if p.suffix in (".json", ".jsonl", ".gz") or p.name.endswith(".json.gz")
    )
    if not files:
        pytest.skip(f"{AMAZON_ENV} directory contains no jsonl files")
    corpus_path = tmp_path / "amazon.tsv"
    args = ["ingest", "amazon", "--per-class", "1000", "--seed", "0", "--out", str(corpus_path)]
    for f in files:
        category = f.name.split(".")[0]
        args += ["--input", f"{f}:{category}"]
    assert cli_main(args) == 0
    cf1, lf1, elapsed = _replicate_tfidf(tmp_path, corpus_path, AMAZON_TABLE, "amazon")
    _pass(f"tf-idf replication amazon (clusters F1 {cf1:.3f}~0.088, "
          f"logreg F1 {lf1:.3f}~0.605, {elapsed:.0f}s)")


# ----------------------------------------------------------------------
# 6. Cross-dataset table consistency
# ----------------------------------------------------------------------

def _table_reports():
    reports = []
    for dataset, table in (("amazon", AMAZON_TABLE), ("news", NEWS_TABLE)):
        for model, (cf1, cacc, lf1, lacc) in table.items():
            reports.append({"f1_macro": cf1, "accuracy": cacc,
                            "meta": {"dataset": dataset, "model": model, "method": "cluster",
                                     "created_at": "2021-01-01T00:00:00+00:00"}})
            reports.append({"f1_macro": lf1, "accuracy": lacc,
                            "meta": {"dataset": dataset, "model": model, "method": "logreg",
                                     "created_at": "2021-01-01T00:00:00+00:00"}})
    return reports


def _parse_markdown_rows(text, section_title):
    lines = text.splitlines()
    start = lines.index(f"### {section_title}")
    rows = {}
    for line in lines[start:]:
        if line.startswith("|") and not line.startswith("|--") and "Model" not in line:
            cells = [c.strip().strip("*") for c in line.strip("|").split("|")]
            rows[cells[0]] = cells[1:]
        elif line.startswith("###") and not line.endswith(section_title):
            break
    return rows


def test_published_table_consistency():
    text = render_tables(_table_reports(), fmt="markdown")
    averaged = _parse_markdown_rows(text, "Average F1 over datasets")
    for model, (cluster_avg, logreg_avg) in AVERAGED_TWO_DP.items():
        assert averaged[model][0] == cluster_avg, (model, averaged[model])
        assert averaged[model][1] == logreg_avg, (model, averaged[model])
    for dataset, table in (("amazon", AMAZON_TABLE), ("news", NEWS_TABLE)):
        rows = _parse_markdown_rows(text, dataset)
        for model, values in table.items():
            assert rows[model] == [f"{v:.3f}" for v in values], (dataset, model)
    _pass("cross-dataset averages reproduce the published two-decimal table")


# ----------------------------------------------------------------------
# 7. Interchange robustness
# ----------------------------------------------------------------------

def _valid_emb_bytes(rng):
    n = int(rng.integers(1, 12))
    d = int(rng.integers(1, 8))
    values = rng.normal(size=(n, d)).astype(np.float32)
    header = json.dumps({"format": "emb-v1", "count": n, "dim": d,
                         "dtype": "f32le", "model": "t"}, separators=(",", ":")).encode()
    return header + b"\n" + values.tobytes(), n, d


def _tamper_header(raw, rng, field, value):
    header_line, payload = raw.split(b"\n", 1)
    header = json.loads(header_line)
    header[field] = value
    return json.dumps(header, separators=(",", ":")).encode() + b"\n" + payload


def test_interchange_robustness(tmp_path):
    path = tmp_path / "corrupt.bin"
    corruptions = [
        "truncate", "extend", "nan", "inf", "count", "dim",
        "dtype", "format", "nonjson", "no_lf", "empty", "expected_n",
    ]
    trials = 1000
    for trial in range(trials):
        rng = derive_rng(2024, "corrupt", trial)
        raw, n, d = _valid_emb_bytes(rng)
        kind = corruptions[trial % len(corruptions)]
        expected_n = None
        if kind == "truncate":
            cut = int(rng.integers(1, n * d * 4 + 1))
            raw = raw[:-cut]
        elif kind == "extend":
            raw = raw + bytes(rng.integers(0, 256, size=int(rng.integers(1, 9)), dtype=np.uint8))
        elif kind in ("nan", "inf"):
            header_len = raw.index(b"\n") + 1
            slot = int(rng.integers(0, n * d))
            bad = struct.pack("<f", float("nan") if kind == "nan" else float("inf"))
            raw = raw[: header_len + slot * 4] + bad + raw[header_len + (slot + 1) * 4 :]
        elif kind == "count":
            wrong = int(rng.integers(0, 100))
            raw = _tamper_header(raw, rng, "count", wrong if wrong != n else wrong + 1)
        elif kind == "dim":
            wrong = int(rng.integers(0, 100))
            raw = _tamper_header(raw, rng, "dim", wrong if wrong != d else wrong + 1)
        elif kind == "dtype":
            raw = _tamper_header(raw, rng, "dtype", "f64le")
        elif kind == "format":
            raw = _tamper_header(raw, rng, "format", "emb-v0")
        elif kind == "nonjson":
            raw = b"garbage header" + raw[raw.index(b"\n") :]
        elif kind == "no_lf":
            raw = raw.replace(b"\n", b" ", 1)
        elif kind == "empty":
            raw = b""
        elif kind == "expected_n":
            expected_n = n + int(rng.integers(1, 10))
        path.write_bytes(raw)
        with pytest.raises(EmbIOError):
            load_embeddings(path, expected_n=expected_n)
    _pass(f"interchange robustness ({trials} corruption trials, all hard errors)")


# ----------------------------------------------------------------------
# 8. [SECONDARY] encoder rank pattern with real exported embeddings
# ----------------------------------------------------------------------

REAL_EMB_ENV = "EMBTOPICS_REAL_EMB_DIR"
ENCODERS = ("sbert", "use", "laser", "declutr")


def test_encoder_rank_pattern():
    """Needs <dir>/<dataset>/corpus.tsv plus <encoder>.bin for all four
    encoders (dataset in {amazon, news}); tf-idf is computed natively."""
    root = os.environ.get(REAL_EMB_ENV)
    if not root or not Path(root).is_dir():
        pytest.skip(f"set {REAL_EMB_ENV} to a directory of exported real embeddings")
    datasets = [p for p in sorted(Path(root).iterdir()) if (p / "corpus.tsv").exists()]
    if not datasets:
        pytest.skip(f"{REAL_EMB_ENV} has no <dataset>/corpus.tsv entries")
    for ds_dir in datasets:
        missing = [e for e in ENCODERS if not (ds_dir / f"{e}.bin").exists()]
        if missing:
            pytest.skip(f"{ds_dir.name}: missing exported embeddings for {missing}")
        scores = {}
        for encoder in ENCODERS:
            report = run_evaluate(ds_dir / "corpus.tsv", ds_dir / f"{encoder}.bin", "cluster",
                                  seed=0, eval_mode="in-sample", dataset=ds_dir.name)
            scores[encoder] = report.f1_macro
        scores["tfidf"] = run_evaluate(ds_dir / "corpus.tsv", "tfidf", "cluster",
                                       seed=0, eval_mode="in-sample", dataset=ds_dir.name).f1_macro
        top = max(scores.values())
        assert scores["use"] == top and all(
            scores["use"] > v for k, v in scores.items() if k != "use"
        ), f"{ds_dir.name}: USE not strictly greatest: {scores}"
        for low in ("laser", "tfidf"):
            for high in ("sbert", "declutr"):
                assert scores[low] < scores[high], f"{ds_dir.name}: {scores}"
        _pass(f"encoder rank pattern on {ds_dir.name}: {scores}")
