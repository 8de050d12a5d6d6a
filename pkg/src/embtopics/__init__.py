"""embtopics: do topic classes show up as clusters in sentence-embedding space?

Builds labeled sentence corpora, vectorizes them (native tf-idf or imported
emb-v1 files from external encoders), fits an unsupervised cluster
classifier and a supervised logistic-regression baseline, and reports
macro-F1 / accuracy tables.
"""

from .cluster import ClusterModel, cluster_predict, fit_cluster_classifier, majority_map
from .embio import EmbeddingMatrix, load_embeddings, save_embeddings
from .errors import DataError
from .ingest import Corpus, Example, ingest_amazon, ingest_news, sample_per_class, select_review_sentence
from .kmeans import KMeansConfig, KMeansResult, kmeans_fit, kmeanspp_init
from .logreg import LogRegConfig, LogRegModel, predict_logreg, train_logreg
from .metrics import (
    EvalReport,
    accuracy,
    angular_distance,
    confusion_matrix,
    cosine_similarity,
    evaluate_predictions,
    macro_f1,
    stratified_split,
)
from .pipeline import run_evaluate
from .report import render_tables
from .tfidf import SparseMatrix, TfidfModel, fit_tfidf, tokenize, transform_tfidf

__version__ = "0.1.0"

__all__ = [
    "ClusterModel", "cluster_predict", "fit_cluster_classifier", "majority_map",
    "EmbeddingMatrix", "load_embeddings", "save_embeddings",
    "DataError",
    "Corpus", "Example", "ingest_amazon", "ingest_news", "sample_per_class", "select_review_sentence",
    "KMeansConfig", "KMeansResult", "kmeans_fit", "kmeanspp_init",
    "LogRegConfig", "LogRegModel", "predict_logreg", "train_logreg",
    "EvalReport", "accuracy", "angular_distance", "confusion_matrix", "cosine_similarity",
    "evaluate_predictions", "macro_f1", "stratified_split",
    "run_evaluate", "render_tables",
    "SparseMatrix", "TfidfModel", "fit_tfidf", "tokenize", "transform_tfidf",
    "__version__",
]
