"""Command line interface.

Subcommands: ingest (amazon|news), embed tfidf, evaluate, report.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from .embio import write_embeddings_stream
from .errors import DataError
from .ingest import Corpus, ingest_amazon, ingest_news
from .pipeline import run_evaluate, summary_line
from .report import load_report, render_tables
from .tfidf import fit_tfidf, transform_tfidf

USAGE_EXIT = 1
DATA_EXIT = 2


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _split_input_spec(spec: str):
    path, sep, category = spec.rpartition(":")
    if not sep or not path or not category:
        raise DataError(f"--input must look like <file>:<category>, got {spec!r}")
    return path, category


def build_parser() -> Parser:
    parser = Parser(prog="embtopics", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="build a corpus TSV from raw data")
    ingest_sub = ingest.add_subparsers(dest="source", required=True)

    amazon = ingest_sub.add_parser("amazon", help="per-category review jsonl files")
    amazon.add_argument("--input", action="append", required=True, metavar="FILE:CATEGORY")
    amazon.add_argument("--per-class", type=int, default=1000)
    amazon.add_argument("--seed", type=int, default=0)
    amazon.add_argument("--review-field", default="reviewText")
    amazon.add_argument("--out", required=True)

    news = ingest_sub.add_parser("news", help="headline/category jsonl file")
    news.add_argument("--input", required=True)
    news.add_argument("--per-class", type=int, default=1000)
    news.add_argument("--seed", type=int, default=0)
    news.add_argument("--out", required=True)

    embed = sub.add_parser("embed", help="vectorize a corpus natively")
    embed_sub = embed.add_subparsers(dest="encoder", required=True)
    tfidf_cmd = embed_sub.add_parser("tfidf", help="bag of words with tf-idf weighting")
    tfidf_cmd.add_argument("--corpus", required=True)
    tfidf_cmd.add_argument("--out", required=True)
    tfidf_cmd.add_argument("--vocab", required=True)

    ev = sub.add_parser("evaluate", help="fit a classifier on embeddings and score it")
    ev.add_argument("--corpus", required=True)
    ev.add_argument("--embeddings", required=True,
                    help="emb-v1 file, or the literal 'tfidf' to vectorize in-process")
    ev.add_argument("--method", choices=["cluster", "logreg"], required=True)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--split", type=float, default=0.2, metavar="FRACTION")
    ev.add_argument("--eval", choices=["split", "in-sample"], default="split", dest="eval_mode")
    ev.add_argument("--dataset", default=None, help="dataset name for reports (default: corpus stem)")
    ev.add_argument("--out", default=None, help="write the evaluation report JSON here")
    ev.add_argument("--confusion-csv", default=None, help="also write the confusion matrix as CSV")
    ev.add_argument("--k", type=int, default=None, help="cluster count (default: number of classes)")
    ev.add_argument("--max-iter", type=int, default=300)
    ev.add_argument("--tol", type=float, default=1e-4)
    ev.add_argument("--n-init", type=int, default=10)
    ev.add_argument("--normalize", choices=["on", "off", "auto"], default="auto")
    ev.add_argument("--l2", type=float, default=1e-4)
    ev.add_argument("--max-epochs", type=int, default=1000)
    ev.add_argument("--model-out", default=None, help="dump the fitted logreg model JSON here")

    rep = sub.add_parser("report", help="render result tables from report files")
    rep.add_argument("reports", nargs="+", metavar="REPORT.json")
    rep.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    rep.add_argument("--out", default=None)

    return parser


def _cmd_ingest(args) -> int:
    if args.source == "amazon":
        inputs = [_split_input_spec(spec) for spec in args.input]
        corpus, skipped = ingest_amazon(
            inputs, per_class=args.per_class, seed=args.seed, review_field=args.review_field
        )
    else:
        corpus, skipped = ingest_news(args.input, per_class=args.per_class, seed=args.seed)
    if not len(corpus):
        raise DataError("no examples ingested; check the input files and field names")
    corpus.validate(per_class=args.per_class)
    corpus.write_tsv(args.out)
    print(f"skipped={skipped}", file=sys.stderr)
    return 0


def _cmd_embed(args) -> int:
    corpus = Corpus.read_tsv(args.corpus)
    model = fit_tfidf(corpus.texts())
    matrix = transform_tfidf(model, corpus.texts())
    if matrix.n_cols == 0:
        raise DataError("tf-idf vocabulary is empty; nothing to embed")

    def blocks(step=1024):
        for s in range(0, matrix.n_rows, step):
            yield matrix.take_rows(np.arange(s, min(matrix.n_rows, s + step))).toarray()

    write_embeddings_stream(args.out, matrix.n_rows, matrix.n_cols, "tfidf", blocks())
    Path(args.vocab).write_text(model.vocab_json(), encoding="utf-8")
    print(f"wrote {args.out} count={matrix.n_rows} dim={matrix.n_cols}", file=sys.stderr)
    return 0


def _cmd_evaluate(args) -> int:
    report = run_evaluate(
        args.corpus,
        args.embeddings,
        args.method,
        seed=args.seed,
        eval_mode=args.eval_mode,
        test_fraction=args.split,
        dataset=args.dataset,
        normalize=args.normalize,
        k=args.k,
        max_iter=args.max_iter,
        tol=args.tol,
        n_init=args.n_init,
        l2=args.l2,
        max_epochs=args.max_epochs,
        out_path=args.out,
        model_out=args.model_out,
    )
    if args.confusion_csv:
        Path(args.confusion_csv).write_text(report.confusion_csv(), encoding="utf-8")
    print(summary_line(report))
    return 0


def _cmd_report(args) -> int:
    reports = [load_report(p) for p in args.reports]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        text = render_tables(reports, fmt=args.format)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "embed":
            return _cmd_embed(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "report":
            return _cmd_report(args)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    raise AssertionError("unreachable")


def entry():
    raise SystemExit(main())
