import json

import numpy as np
import pytest

from embtopics.cli import main
from embtopics.embio import EmbeddingMatrix, load_embeddings, save_embeddings
from embtopics.ingest import Corpus, Example
from embtopics.rng import derive_rng


def make_news_file(path, per_cat=30, cats=("CRIME", "SPORTS", "TECH")):
    with open(path, "w", encoding="utf-8") as fh:
        for c, cat in enumerate(cats):
            for i in range(per_cat):
                fh.write(json.dumps({"headline": f"{cat.lower()} headline number {i}", "category": cat}) + "\n")


def make_blob_corpus_and_embeddings(tmp_path, per_class=40, d=8, seed=0):
    rng = derive_rng(seed, "cli-blobs")
    centers = {"alpha": np.zeros(d), "beta": np.zeros(d), "gamma": np.zeros(d)}
    basis = np.linalg.qr(rng.normal(size=(d, d)))[0]
    for i, label in enumerate(sorted(centers)):
        centers[label] = basis[i] * 6.0
    examples, rows = [], []
    for label in sorted(centers):
        for i in range(per_class):
            examples.append(Example(f"{label}:{i}", label, f"{label} text {i}"))
            rows.append(rng.normal(scale=0.1, size=d) + centers[label])
    corpus = Corpus(examples=examples, labels=sorted(centers))
    corpus_path = tmp_path / "corpus.tsv"
    corpus.write_tsv(corpus_path)
    emb_path = tmp_path / "emb.bin"
    save_embeddings(EmbeddingMatrix(np.asarray(rows, dtype=np.float32), model_name="blobs"), emb_path)
    return corpus_path, emb_path


def test_ingest_news_cli(tmp_path, capsys):
    news = tmp_path / "news.jsonl"
    make_news_file(news)
    out = tmp_path / "corpus.tsv"
    code = main(["ingest", "news", "--input", str(news), "--per-class", "10", "--seed", "3",
                 "--out", str(out)])
    assert code == 0
    assert "skipped=0" in capsys.readouterr().err
    corpus = Corpus.read_tsv(out)
    assert len(corpus) == 30 and corpus.labels == ["CRIME", "SPORTS", "TECH"]


def test_ingest_amazon_cli(tmp_path, capsys):
    f = tmp_path / "books.jsonl"
    sentence = " ".join(f"w{i}" for i in range(12)) + "."
    f.write_text(json.dumps({"reviewText": sentence}) + "\n")
    out = tmp_path / "corpus.tsv"
    code = main(["ingest", "amazon", "--input", f"{f}:Books", "--out", str(out)])
    assert code == 0
    assert Corpus.read_tsv(out).labels == ["Books"]


def test_ingest_amazon_bad_input_spec(tmp_path):
    code = main(["ingest", "amazon", "--input", "nocolon", "--out", str(tmp_path / "x.tsv")])
    assert code == 2


def test_ingest_empty_yield_is_data_error(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code = main(["ingest", "news", "--input", str(empty), "--out", str(tmp_path / "x.tsv")])
    assert code == 2
    assert "no examples" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["evaluate", "--method", "bogus"])
    assert exc.value.code == 1


def test_missing_file_is_data_error(tmp_path):
    code = main(["evaluate", "--corpus", str(tmp_path / "absent.tsv"),
                 "--embeddings", "tfidf", "--method", "cluster"])
    assert code == 2


def test_embed_tfidf_cli(tmp_path):
    news = tmp_path / "news.jsonl"
    make_news_file(news, per_cat=20)
    corpus_path = tmp_path / "corpus.tsv"
    main(["ingest", "news", "--input", str(news), "--per-class", "20", "--out", str(corpus_path)])
    emb = tmp_path / "emb.bin"
    vocab = tmp_path / "vocab.json"
    code = main(["embed", "tfidf", "--corpus", str(corpus_path), "--out", str(emb),
                 "--vocab", str(vocab)])
    assert code == 0
    matrix = load_embeddings(emb, expected_n=60)
    assert matrix.model_name == "tfidf"
    norms = np.linalg.norm(matrix.data.astype(np.float64), axis=1)
    assert np.allclose(norms[norms > 0], 1.0, atol=1e-6)
    entries = json.loads(vocab.read_text())
    assert all(set(v) == {"index", "idf"} for v in entries.values())
    indices = sorted(v["index"] for v in entries.values())
    assert indices == list(range(matrix.d))


def test_evaluate_alignment_mismatch(tmp_path, capsys):
    corpus_path, emb_path = make_blob_corpus_and_embeddings(tmp_path)
    short = Corpus.read_tsv(corpus_path)
    short.examples = short.examples[:-1]
    short.write_tsv(corpus_path)
    code = main(["evaluate", "--corpus", str(corpus_path), "--embeddings", str(emb_path),
                 "--method", "cluster"])
    assert code == 2
    assert "alignment" in capsys.readouterr().err


def test_evaluate_cluster_end_to_end(tmp_path, capsys):
    corpus_path, emb_path = make_blob_corpus_and_embeddings(tmp_path)
    report_path = tmp_path / "report.json"
    cm_path = tmp_path / "confusion.csv"
    code = main(["evaluate", "--corpus", str(corpus_path), "--embeddings", str(emb_path),
                 "--method", "cluster", "--seed", "1", "--out", str(report_path),
                 "--confusion-csv", str(cm_path)])
    assert code == 0
    cm_lines = cm_path.read_text().strip().split("\n")
    assert cm_lines[0] == "true\\pred,alpha,beta,gamma"
    assert len(cm_lines) == 4
    line = capsys.readouterr().out.strip()
    fields = line.split()
    assert fields[0] == "corpus" and fields[1] == "blobs" and fields[2] == "cluster"
    report = json.loads(report_path.read_text())
    assert report["f1_macro"] >= 0.95
    assert report["meta"]["normalize"] is True  # auto: non-tfidf embeddings
    assert report["meta"]["eval_mode"] == "split"
    assert len(report["meta"]["corpus_sha256"]) == 64
    assert len(report["meta"]["embeddings_sha256"]) == 64


def test_evaluate_logreg_with_native_tfidf(tmp_path):
    news = tmp_path / "news.jsonl"
    make_news_file(news, per_cat=30)
    corpus_path = tmp_path / "corpus.tsv"
    main(["ingest", "news", "--input", str(news), "--per-class", "30", "--out", str(corpus_path)])
    report_path = tmp_path / "report.json"
    code = main(["evaluate", "--corpus", str(corpus_path), "--embeddings", "tfidf",
                 "--method", "logreg", "--eval", "in-sample", "--out", str(report_path),
                 "--model-out", str(tmp_path / "model.json")])
    assert code == 0
    report = json.loads(report_path.read_text())
    # headlines contain their category token, so in-sample tf-idf logreg aces it
    assert report["f1_macro"] >= 0.99
    assert report["meta"]["model"] == "tfidf"
    assert report["meta"]["normalize"] is False  # auto: tf-idf rows already unit
    assert report["meta"]["embeddings_sha256"] is None
    model = json.loads((tmp_path / "model.json").read_text())
    assert set(model) == {"classes", "weights", "bias"}


def test_report_cli(tmp_path, capsys):
    corpus_path, emb_path = make_blob_corpus_and_embeddings(tmp_path)
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    main(["evaluate", "--corpus", str(corpus_path), "--embeddings", str(emb_path),
          "--method", "cluster", "--out", str(r1), "--dataset", "blobs"])
    main(["evaluate", "--corpus", str(corpus_path), "--embeddings", str(emb_path),
          "--method", "logreg", "--out", str(r2), "--dataset", "blobs"])
    capsys.readouterr()
    out_md = tmp_path / "tables.md"
    code = main(["report", str(r1), str(r2), "--out", str(out_md)])
    assert code == 0
    text = out_md.read_text()
    assert "### blobs" in text and "Average F1 over datasets" in text
    code = main(["report", str(r1), "--format", "csv"])
    assert code == 0
    assert "Clusters F1" in capsys.readouterr().out


def test_report_duplicate_warning(tmp_path, capsys):
    corpus_path, emb_path = make_blob_corpus_and_embeddings(tmp_path)
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for r in (r1, r2):
        main(["evaluate", "--corpus", str(corpus_path), "--embeddings", str(emb_path),
              "--method", "cluster", "--out", str(r), "--dataset", "blobs"])
    capsys.readouterr()
    assert main(["report", str(r1), str(r2)]) == 0
    assert "duplicate" in capsys.readouterr().err
