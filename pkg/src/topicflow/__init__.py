"""Topic Flow Networks: topic-labeled, year-stamped co-authorship multigraphs.

Pipeline: :mod:`corpus` (ingestion, selection map) -> :mod:`textprep`
(tf-idf) -> :mod:`topicmodel` (NMF, topic vectors) -> :mod:`tfn`
(network construction) -> :mod:`analysis` -> :mod:`export`.
"""
from .corpus import Corpus, PublicationRecord, load_corpus, select
from .errors import InputFormatError, NumericError, ParameterError, StageError, TopicFlowError
from .textprep import DocTermMatrix, Vocabulary, build_matrix, is_english, load_stopwords, tokenize, vectorize
from .tfn import (
    ExpertiseTable,
    TopicFlowNetwork,
    build_tfn,
    main_topic,
    main_topic_of_set,
    restrict,
)
from .topicmodel import TopicModel, author_theta, corpus_theta, fit_nmf, paper_theta, top_terms

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "DocTermMatrix",
    "ExpertiseTable",
    "InputFormatError",
    "NumericError",
    "ParameterError",
    "PublicationRecord",
    "StageError",
    "TopicFlowError",
    "TopicFlowNetwork",
    "TopicModel",
    "Vocabulary",
    "author_theta",
    "build_matrix",
    "build_tfn",
    "corpus_theta",
    "fit_nmf",
    "is_english",
    "load_corpus",
    "load_stopwords",
    "main_topic",
    "main_topic_of_set",
    "paper_theta",
    "restrict",
    "select",
    "tokenize",
    "top_terms",
    "vectorize",
]
