"""Bag-of-words vectorizer with smoothed TF-IDF weighting.

idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1, rows L2-normalized; tokens are
lowercased maximal alphanumeric runs of length >= 2. No stop words, no
sublinear tf, no n-grams.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DataError

_TOKEN = re.compile(r"[^\W_]{2,}", re.UNICODE)


@dataclass
class SparseMatrix:
    """Compressed-row matrix; rows are unit L2 norm or entirely empty."""

    n_rows: int
    n_cols: int
    indptr: np.ndarray  # int64, len n_rows + 1
    indices: np.ndarray  # int64, strictly increasing within each row
    data: np.ndarray  # float64, finite and nonzero

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self.data.size)

    def validate(self, require_unit_rows: bool = True) -> None:
        if self.indptr.shape != (self.n_rows + 1,) or self.indptr[0] != 0:
            raise DataError("bad indptr")
        if self.indptr[-1] != self.data.size or self.indices.size != self.data.size:
            raise DataError("indptr/indices/data size mismatch")
        if np.any(np.diff(self.indptr) < 0):
            raise DataError("indptr not non-decreasing")
        if self.data.size:
            if not np.isfinite(self.data).all() or np.any(self.data == 0.0):
                raise DataError("stored values must be finite and non-zero")
            if self.indices.min() < 0 or self.indices.max() >= self.n_cols:
                raise DataError("column index out of range")
        for r in range(self.n_rows):
            cols = self.indices[self.indptr[r] : self.indptr[r + 1]]
            if cols.size > 1 and np.any(np.diff(cols) <= 0):
                raise DataError(f"row {r}: column indices not strictly increasing")
        if require_unit_rows:
            norms = np.sqrt(self.row_sqnorms())
            bad = np.flatnonzero((norms > 0) & (np.abs(norms - 1.0) > 1e-9))
            if bad.size:
                raise DataError(f"row {bad[0]} has L2 norm {norms[bad[0]]}, expected 1 or empty")

    def row_sqnorms(self) -> np.ndarray:
        out = np.zeros(self.n_rows, dtype=np.float64)
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        np.add.at(out, rows, self.data**2)
        return out

    def l2_normalized(self) -> "SparseMatrix":
        # empty rows have nothing to scale, so the repeat skips their norms
        norms = np.sqrt(self.row_sqnorms())
        data = self.data / np.repeat(norms, np.diff(self.indptr))
        return SparseMatrix(self.n_rows, self.n_cols, self.indptr.copy(), self.indices.copy(), data)

    def take_rows(self, rows) -> "SparseMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        lengths = np.diff(self.indptr)[rows]
        indptr = np.zeros(rows.size + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int64)
        data = np.empty(indptr[-1], dtype=np.float64)
        for out_r, r in enumerate(rows):
            s, e = self.indptr[r], self.indptr[r + 1]
            indices[indptr[out_r] : indptr[out_r + 1]] = self.indices[s:e]
            data[indptr[out_r] : indptr[out_r + 1]] = self.data[s:e]
        return SparseMatrix(rows.size, self.n_cols, indptr, indices, data)

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.float64)
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        out[rows, self.indices] = self.data
        return out


@dataclass
class TfidfModel:
    vocabulary: dict[str, int]  # token -> column index, 0..V-1
    idf: np.ndarray  # float64, aligned with column indices
    n_docs: int

    @property
    def n_features(self) -> int:
        return len(self.vocabulary)

    def vocab_json(self) -> str:
        entries = {
            tok: {"index": idx, "idf": float(self.idf[idx])}
            for tok, idx in sorted(self.vocabulary.items(), key=lambda kv: kv[1])
        }
        return json.dumps(entries, ensure_ascii=False, indent=0)


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def fit_tfidf(texts) -> TfidfModel:
    texts = list(texts)
    if not texts:
        raise DataError("cannot fit tf-idf on an empty corpus")
    df = Counter()
    for text in texts:
        df.update(set(tokenize(text)))
    vocab = {tok: i for i, tok in enumerate(sorted(df))}
    n = len(texts)
    idf = np.ones(len(vocab), dtype=np.float64)
    for tok, i in vocab.items():
        idf[i] = np.log((1.0 + n) / (1.0 + df[tok])) + 1.0
    return TfidfModel(vocabulary=vocab, idf=idf, n_docs=n)


def transform_tfidf(model: TfidfModel, texts) -> SparseMatrix:
    """Rows are count * idf, L2-normalized; unknown tokens are ignored."""
    texts = list(texts)
    indptr = np.zeros(len(texts) + 1, dtype=np.int64)
    indices_parts = []
    data_parts = []
    vocab = model.vocabulary
    for r, text in enumerate(texts):
        counts = Counter(vocab[t] for t in tokenize(text) if t in vocab)
        if counts:
            cols = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
            vals = np.array([counts[c] for c in cols], dtype=np.float64) * model.idf[cols]
            vals /= np.sqrt((vals**2).sum())
            indices_parts.append(cols)
            data_parts.append(vals)
        indptr[r + 1] = indptr[r] + len(counts)
    indices = np.concatenate(indices_parts) if indices_parts else np.empty(0, dtype=np.int64)
    data = np.concatenate(data_parts) if data_parts else np.empty(0, dtype=np.float64)
    return SparseMatrix(len(texts), model.n_features, indptr, indices, data)
