"""Corpus ingestion: sentence selection, per-class downsampling, TSV I/O.

Review corpora keep the first sentence of each review whose whitespace
word count is strictly between 10 and 20; news corpora keep the headline
verbatim. Each class is then capped at per_class examples by seeded
sampling, and the result is written as `id<TAB>label<TAB>text` lines.
"""

from __future__ import annotations

import gzip
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .rng import derive_rng

# sentence boundary: maximal run of .!? followed by whitespace (or end of
# text, which needs no split); the terminator stays with its sentence
_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")
_CTRL_WS = re.compile(r"[\t\n\r\f\v]")

MIN_WORDS_EXCL = 10
MAX_WORDS_EXCL = 20


class IngestError(DataError):
    pass


@dataclass(frozen=True)
class Example:
    id: str
    label: str
    text: str


@dataclass
class Corpus:
    """Ordered labeled examples; the single source of row alignment."""

    examples: list[Example]
    labels: list[str]  # sorted distinct class names
    seed: int | None = None

    def __len__(self):
        return len(self.examples)

    def texts(self) -> list[str]:
        return [e.text for e in self.examples]

    def label_per_row(self) -> list[str]:
        return [e.label for e in self.examples]

    def validate(self, per_class: int | None = None) -> None:
        seen_ids = set()
        counts: dict[str, int] = {}
        for ex in self.examples:
            if not ex.text:
                raise DataError(f"example {ex.id!r} has empty text")
            if _CTRL_WS.search(ex.text) or _CTRL_WS.search(ex.label) or _CTRL_WS.search(ex.id):
                raise DataError(f"example {ex.id!r} contains tab/newline characters")
            if ex.id in seen_ids:
                raise DataError(f"duplicate example id {ex.id!r}")
            seen_ids.add(ex.id)
            counts[ex.label] = counts.get(ex.label, 0) + 1
        if sorted(counts) != list(self.labels):
            raise DataError("corpus label set does not match example labels")
        if per_class is not None:
            over = {c: n for c, n in counts.items() if n > per_class}
            if over:
                raise DataError(f"classes over the per-class cap: {over}")

    def write_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for ex in self.examples:
                fh.write(f"{_sanitize(ex.id)}\t{_sanitize(ex.label)}\t{_sanitize(ex.text)}\n")

    @classmethod
    def read_tsv(cls, path) -> "Corpus":
        examples = []
        seen = set()
        try:
            fh = open(path, "r", encoding="utf-8", newline="")
        except OSError as exc:
            raise IngestError(f"cannot read corpus file {path}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if "\r" in line:
                    raise DataError(f"{path}:{lineno}: carriage return in corpus line (LF endings required)")
                if not line:
                    raise DataError(f"{path}:{lineno}: blank line in corpus file")
                parts = line.split("\t")
                if len(parts) != 3:
                    raise DataError(f"{path}:{lineno}: expected 3 tab-separated columns, got {len(parts)}")
                ex_id, label, text = parts
                if not ex_id or not label or not text:
                    raise DataError(f"{path}:{lineno}: empty column")
                if ex_id in seen:
                    raise DataError(f"{path}:{lineno}: duplicate example id {ex_id!r}")
                seen.add(ex_id)
                examples.append(Example(ex_id, label, text))
        if not examples:
            raise DataError(f"{path}: corpus file is empty")
        return cls(examples=examples, labels=sorted({e.label for e in examples}))


def _sanitize(s: str) -> str:
    return _CTRL_WS.sub(" ", s)


def split_sentences(text: str) -> list[str]:
    parts = _SENTENCE_BREAK.split(text)
    return [p.strip() for p in parts if p.strip()]


def word_count(s: str) -> int:
    return len(s.split())


def select_review_sentence(review_text: str) -> str | None:
    """First sentence with word count strictly between 10 and 20, or None."""
    for sentence in split_sentences(review_text):
        if MIN_WORDS_EXCL < word_count(sentence) < MAX_WORDS_EXCL:
            return _sanitize(sentence)
    return None


def sample_per_class(examples, per_class: int, seed: int) -> list[Example]:
    """Cap each class at per_class examples, seeded per class.

    Classes at or below the cap are kept whole. The retained examples keep
    their original relative order. Per-class RNG streams are independent
    (keyed by seed and class name), so the choice made for one class does
    not depend on any other class.
    """
    if per_class < 1:
        raise ValueError(f"per_class must be >= 1, got {per_class}")
    examples = list(examples)
    by_label: dict[str, list[int]] = {}
    for pos, ex in enumerate(examples):
        by_label.setdefault(ex.label, []).append(pos)
    keep = set()
    for label, positions in by_label.items():
        if len(positions) <= per_class:
            keep.update(positions)
        else:
            rng = derive_rng(seed, "sample", label)
            chosen = rng.choice(len(positions), size=per_class, replace=False)
            keep.update(positions[i] for i in sorted(chosen))
    return [ex for pos, ex in enumerate(examples) if pos in keep]


def _iter_jsonl(path):
    """Yield (lineno, record) for parseable lines; count the bad ones.

    Yields (lineno, None) for a malformed line so the caller can tally it.
    Entirely blank lines are ignored (trailing newline artifacts, not
    records).
    """
    p = Path(path)
    opener = gzip.open if p.suffix == ".gz" else open
    try:
        fh = opener(p, "rb")
    except OSError as exc:
        raise IngestError(f"cannot read input file {path}: {exc}") from exc
    with fh:
        try:
            for lineno, raw in enumerate(fh):
                if not raw.strip():
                    continue
                try:
                    record = json.loads(raw.decode("utf-8"))
                except (UnicodeDecodeError, json.JSONDecodeError):
                    yield lineno, None
                    continue
                if not isinstance(record, dict):
                    yield lineno, None
                    continue
                yield lineno, record
        except (OSError, EOFError) as exc:  # gzip truncation, I/O failure mid-read
            raise IngestError(f"error while reading {path}: {exc}") from exc


def _finalize(examples, per_class, seed, skipped):
    sampled = sample_per_class(examples, per_class, seed)
    sampled.sort(key=lambda ex: ex.label)  # stable: per-class file order kept
    corpus = Corpus(examples=sampled, labels=sorted({e.label for e in sampled}), seed=seed)
    return corpus, skipped


def ingest_amazon(inputs, per_class: int, seed: int, review_field: str = "reviewText"):
    """Build a review corpus from (jsonl path, category name) pairs.

    Returns (corpus, skipped). Reviews without a qualifying sentence are
    filtered silently (the selection rule working as intended); malformed
    records are skipped and counted.
    """
    collected: list[Example] = []
    skipped = 0
    for file_idx, (path, category) in enumerate(inputs):
        category = _sanitize(str(category)).strip()
        if not category:
            raise IngestError(f"empty category name for input file {path}")
        for lineno, record in _iter_jsonl(path):
            if record is None:
                skipped += 1
                continue
            text = record.get(review_field)
            if not isinstance(text, str) or not text.strip():
                skipped += 1
                continue
            sentence = select_review_sentence(text)
            if sentence is None:
                continue
            collected.append(Example(f"{category}:{file_idx}:{lineno}", category, sentence))
    return _finalize(collected, per_class, seed, skipped)


def ingest_news(path, per_class: int, seed: int):
    """Build a news corpus from a jsonl file with headline/category fields."""
    collected: list[Example] = []
    skipped = 0
    for lineno, record in _iter_jsonl(path):
        if record is None:
            skipped += 1
            continue
        headline = record.get("headline")
        category = record.get("category")
        if not isinstance(headline, str) or not isinstance(category, str):
            skipped += 1
            continue
        headline = _sanitize(headline).strip()
        category = _sanitize(category).strip()
        if not headline or not category:
            skipped += 1
            continue
        collected.append(Example(f"{category}:{lineno}", category, headline))
    return _finalize(collected, per_class, seed, skipped)
