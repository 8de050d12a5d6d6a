"""End-to-end evaluation runs: corpus + embeddings -> fitted model -> report.

The embeddings argument is either an emb-v1 file path or the literal
"tfidf", which vectorizes the corpus in-process and keeps the sparse rows
(the densified emb-v1 route works too but costs far more memory at full
corpus size).
"""

from __future__ import annotations

import datetime as _dt
import hashlib
from dataclasses import asdict
from pathlib import Path

from . import _kernels
from .cluster import cluster_predict, fit_cluster_classifier
from .embio import load_embeddings
from .errors import DataError
from .ingest import Corpus
from .kmeans import KMeansConfig
from .logreg import LogRegConfig, predict_logreg, train_logreg
from .metrics import EvalReport, evaluate_predictions, stratified_split
from .tfidf import SparseMatrix, fit_tfidf, transform_tfidf

TFIDF_LITERAL = "tfidf"


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _resolve_normalize(mode: str, model_name: str) -> bool:
    """auto: normalize imported encoder vectors, skip tf-idf (already unit)."""
    if mode == "on":
        return True
    if mode == "off":
        return False
    if mode == "auto":
        return model_name != TFIDF_LITERAL
    raise DataError(f"unknown normalize mode {mode!r}")


def _take_rows(X, idx):
    if isinstance(X, SparseMatrix):
        return X.take_rows(idx)
    return X[idx]


def run_evaluate(
    corpus_path,
    embeddings,
    method: str,
    *,
    seed: int = 0,
    eval_mode: str = "split",
    test_fraction: float = 0.2,
    dataset: str | None = None,
    normalize: str = "auto",
    k: int | None = None,
    max_iter: int = 300,
    tol: float = 1e-4,
    n_init: int = 10,
    l2: float = 1e-4,
    max_epochs: int = 1000,
    out_path=None,
    model_out=None,
) -> EvalReport:
    if method not in ("cluster", "logreg"):
        raise DataError(f"unknown method {method!r}")
    if eval_mode not in ("split", "in-sample"):
        raise DataError(f"unknown eval mode {eval_mode!r}")

    corpus = Corpus.read_tsv(corpus_path)
    y = corpus.label_per_row()
    labels = corpus.labels

    if str(embeddings) == TFIDF_LITERAL:
        X = transform_tfidf(fit_tfidf(corpus.texts()), corpus.texts())
        model_name = TFIDF_LITERAL
        emb_hash = None
    else:
        emb = load_embeddings(embeddings, expected_n=len(corpus))
        X = emb.data
        model_name = emb.model_name or Path(embeddings).stem
        emb_hash = file_sha256(embeddings)

    do_normalize = _resolve_normalize(normalize, model_name)

    singletons = []
    if eval_mode == "split":
        split = stratified_split(y, test_fraction, seed)
        singletons = split.singleton_labels
        X_train, y_train = _take_rows(X, split.train), [y[i] for i in split.train]
        X_test, y_test = _take_rows(X, split.test), [y[i] for i in split.test]
    else:
        X_train = X_test = X
        y_train = y_test = y

    meta = {
        "dataset": dataset or Path(corpus_path).stem,
        "model": model_name,
        "method": method,
        "seed": seed,
        "eval_mode": eval_mode,
        "test_fraction": test_fraction if eval_mode == "split" else None,
        "normalize": do_normalize,
        "corpus_sha256": file_sha256(corpus_path),
        "embeddings_sha256": emb_hash,
        "kernel_backend": _kernels.active_backend(),
        "created_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "n_examples": len(corpus),
        "n_classes": len(labels),
        "split_singleton_classes": singletons,
    }

    if method == "cluster":
        config = KMeansConfig(
            k=k if k is not None else len(labels),
            max_iter=max_iter,
            tol=tol,
            n_init=n_init,
            seed=seed,
        )
        meta["config"] = asdict(config)
        model = fit_cluster_classifier(X_train, y_train, config, normalize=do_normalize)
        y_pred = cluster_predict(model, X_test)
    else:
        config = LogRegConfig(l2=l2, max_epochs=max_epochs, seed=seed)
        meta["config"] = asdict(config)
        model = train_logreg(X_train, y_train, config)
        y_pred, _ = predict_logreg(model, X_test)
        if model_out is not None:
            Path(model_out).write_text(model.to_json(), encoding="utf-8")

    report = evaluate_predictions(y_test, y_pred, labels, meta)
    if out_path is not None:
        Path(out_path).write_text(report.to_json() + "\n", encoding="utf-8")
    return report


def summary_line(report: EvalReport) -> str:
    meta = report.meta
    return (
        f"{meta.get('dataset', '?')} {meta.get('model', '?')} {meta.get('method', '?')} "
        f"{report.f1_macro:.4f} {report.accuracy:.4f}"
    )
