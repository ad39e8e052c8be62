"""Tokenization, the stop-word language heuristic and tf-idf matrices."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import groupby
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, PublicationRecord
from .errors import InputFormatError, ParameterError

ENGLISH_THRESHOLD = 0.10
DEFAULT_MIN_DF = 2

# letters only; digits, underscore and punctuation separate tokens
_TOKEN_RE = re.compile(r"[^\W\d_]+")


def tokenize(text: str) -> list[str]:
    out = []
    for run in _TOKEN_RE.findall(text.lower()):
        if run.isalpha():
            out.append(run)
        else:
            # \w also admits non-decimal numerics such as vulgar fractions
            out.extend("".join(g) for alpha, g in groupby(run, str.isalpha) if alpha)
    return [t for t in out if len(t) >= 2]


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stop-word file (one token per line, ``#`` comments).

    Without ``path`` the bundled English list is used.
    """
    if path is None:
        text = resources.files("topicflow.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def is_english(tokens: Sequence[str], stopwords: Iterable[str], threshold: float = ENGLISH_THRESHOLD) -> bool:
    if not 0.0 <= threshold <= 1.0:
        raise ParameterError(f"threshold {threshold} not in [0, 1]")
    if not tokens:
        return False
    sw = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    hits = sum(1 for t in tokens if t in sw)
    return hits / len(tokens) >= threshold


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    document_frequency: np.ndarray
    n_documents: int

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def idf(self) -> np.ndarray:
        # smoothed idf, strictly positive
        return np.log((1.0 + self.n_documents) / (1.0 + self.document_frequency)) + 1.0


@dataclass(frozen=True)
class DocTermMatrix:
    rows: tuple[str, ...]
    values: sp.csr_matrix
    vocabulary: Vocabulary

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def row_index(self) -> dict[str, int]:
        return {d: i for i, d in enumerate(self.rows)}

    def to_tsv(self, path: str | Path) -> None:
        coo = self.values.tocoo()
        order = np.lexsort((coo.col, coo.row))
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("row\tterm\tvalue\n")
            for k in order:
                fh.write(f"{self.rows[coo.row[k]]}\t{self.vocabulary.terms[coo.col[k]]}\t{coo.data[k]:.9g}\n")


def _content_tokens(record: PublicationRecord, stopwords: frozenset[str]) -> list[str]:
    return [t for t in tokenize(record.text) if t not in stopwords]


def _tfidf_row(counts: Counter, vocab: Vocabulary, idf: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pairs = sorted((vocab.index[t], c) for t, c in counts.items() if t in vocab.index)
    if not pairs:
        return np.empty(0, dtype=np.int64), np.empty(0)
    cols = np.array([p[0] for p in pairs], dtype=np.int64)
    vals = np.array([p[1] for p in pairs], dtype=float) * idf[cols]
    vals /= np.sqrt(np.dot(vals, vals))
    return cols, vals


def build_matrix(
    corpus: Corpus,
    stopwords: Iterable[str],
    threshold: float = ENGLISH_THRESHOLD,
    require_abstract: bool = True,
    min_df: int = DEFAULT_MIN_DF,
) -> DocTermMatrix:
    """Tf-idf matrix over the English (and optionally abstract-bearing) papers.

    tf is the raw count, idf = ln((1 + N) / (1 + df)) + 1, rows are L2
    normalized. Documents left without vocabulary terms stay as zero rows.
    """
    if len(corpus) == 0:
        raise InputFormatError("corpus is empty")
    sw = frozenset(stopwords)
    kept: list[str] = []
    bags: list[Counter] = []
    for rec in corpus:
        tokens = tokenize(rec.text)
        if not is_english(tokens, sw, threshold):
            continue
        if require_abstract and rec.abstract is None:
            continue
        kept.append(rec.paper_id)
        bags.append(Counter(t for t in tokens if t not in sw))
    if not kept:
        raise InputFormatError("all documents were filtered out")

    df = Counter()
    for bag in bags:
        df.update(bag.keys())
    terms = tuple(sorted(t for t, c in df.items() if c >= min_df))
    vocab = Vocabulary(terms, np.array([df[t] for t in terms], dtype=np.int64), len(kept))
    idf = vocab.idf

    indptr = [0]
    indices: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for bag in bags:
        cols, vals = _tfidf_row(bag, vocab, idf)
        indices.append(cols)
        data.append(vals)
        indptr.append(indptr[-1] + len(cols))
    values = sp.csr_matrix(
        (
            np.concatenate(data) if data else np.empty(0),
            np.concatenate(indices) if indices else np.empty(0, dtype=np.int64),
            np.asarray(indptr),
        ),
        shape=(len(kept), len(terms)),
    )
    return DocTermMatrix(tuple(kept), values, vocab)


def vectorize(vocabulary: Vocabulary, record: PublicationRecord, stopwords: Iterable[str]) -> sp.csr_matrix:
    """Project an arbitrary record into the trained tf-idf space (1 x V)."""
    sw = frozenset(stopwords)
    cols, vals = _tfidf_row(Counter(_content_tokens(record, sw)), vocabulary, vocabulary.idf)
    return sp.csr_matrix((vals, cols, np.array([0, len(cols)])), shape=(1, len(vocabulary)))


def english_mask(corpus: Corpus, stopwords: Iterable[str], threshold: float = ENGLISH_THRESHOLD) -> dict[str, bool]:
    sw = frozenset(stopwords)
    return {r.paper_id: is_english(tokenize(r.text), sw, threshold) for r in corpus}

