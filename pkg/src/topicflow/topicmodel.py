"""NMF topic model (Frobenius objective, multiplicative updates) and topic vectors."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .corpus import DEFAULT_WINDOW, Corpus, select
from .errors import NumericError, ParameterError
from .textprep import DocTermMatrix, Vocabulary, english_mask, vectorize

log = logging.getLogger(__name__)

DEFAULT_TOPICS = 64
DEFAULT_MAX_ITER = 200
DEFAULT_TOL = 1e-4
_EPS = 1e-12
_PROJECTION_ITER = 200


@dataclass(frozen=True)
class TopicModel:
    n_topics: int
    topic_term: np.ndarray  # (n_topics, V)
    doc_topic: np.ndarray  # (D, n_topics)
    doc_ids: tuple[str, ...]
    terms: tuple[str, ...]
    training_error_trace: tuple[float, ...]
    seed: int
    vocabulary: Vocabulary | None = field(default=None, compare=False, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.training_error_trace) - 1

    @property
    def final_error(self) -> float:
        return self.training_error_trace[-1]

    def doc_row(self, paper_id: str) -> int | None:
        idx = self.__dict__.get("_doc_index")
        if idx is None:
            idx = {d: i for i, d in enumerate(self.doc_ids)}
            object.__setattr__(self, "_doc_index", idx)
        return idx.get(paper_id)


def _sq_error(X: sp.csr_matrix, x_sq: float, W: np.ndarray, H: np.ndarray, XHt: np.ndarray) -> float:
    # ||X - WH||^2 = ||X||^2 - 2 <W, X H^T> + <W^T W, H H^T>
    err = x_sq - 2.0 * float(np.sum(W * XHt)) + float(np.sum((W.T @ W) * (H @ H.T)))
    return max(err, 0.0)


def fit_nmf(
    matrix: DocTermMatrix | sp.spmatrix | np.ndarray,
    n_topics: int = DEFAULT_TOPICS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> TopicModel:
    """Factorize ``X ~ W H`` with Lee-Seung multiplicative updates.

    ``W`` (documents x topics) and ``H`` (topics x terms) start from seeded
    uniform values in (0, 1]. Iteration stops after ``max_iter`` sweeps or once
    the relative decrease of the squared Frobenius error drops below ``tol``.
    ``training_error_trace`` holds the squared error before the first sweep and
    after every sweep.
    """
    if isinstance(matrix, DocTermMatrix):
        X = matrix.values
        doc_ids, vocab = matrix.rows, matrix.vocabulary
        terms = vocab.terms
    else:
        X = matrix
        vocab = None
        doc_ids = tuple(str(i) for i in range(X.shape[0]))
        terms = tuple(str(j) for j in range(X.shape[1]))
    X = sp.csr_matrix(X, dtype=np.float64)
    n_docs, n_terms = X.shape
    if n_docs == 0 or n_terms == 0:
        raise ParameterError("cannot factorize an empty matrix")
    if not 1 <= n_topics <= min(n_docs, n_terms):
        raise ParameterError(f"n_topics={n_topics} outside [1, {min(n_docs, n_terms)}]")
    if not np.all(np.isfinite(X.data)) or np.any(X.data < 0):
        raise NumericError("input matrix must be finite and non-negative")

    rng = np.random.default_rng(seed)
    # 1 - U[0,1) lies in (0, 1]
    W = 1.0 - rng.random((n_docs, n_topics))
    H = 1.0 - rng.random((n_topics, n_terms))
    x_sq = float(X.multiply(X).sum())
    XT = X.T.tocsr()

    trace = [_sq_error(X, x_sq, W, H, np.asarray(X @ H.T))]
    for it in range(max_iter):
        WtX = np.asarray(XT @ W).T
        H *= WtX / ((W.T @ W) @ H + _EPS)
        XHt = np.asarray(X @ H.T)
        W *= XHt / (W @ (H @ H.T) + _EPS)
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(H))):
            raise NumericError(f"non-finite factor entries at iteration {it + 1}")
        trace.append(_sq_error(X, x_sq, W, H, XHt))
        prev, cur = trace[-2], trace[-1]
        if cur == 0.0 or (prev > 0 and (prev - cur) / prev < tol):
            break
    log.info("nmf: %d iterations, squared error %.6g", len(trace) - 1, trace[-1])
    return TopicModel(n_topics, H, W, tuple(doc_ids), tuple(terms), tuple(trace), seed, vocab)


def relative_error(model: TopicModel, X) -> float:
    X = sp.csr_matrix(X)
    norm_sq = float(X.multiply(X).sum())
    return float(np.sqrt(model.final_error / norm_sq)) if norm_sq else 0.0


def _normalize(weights: np.ndarray) -> np.ndarray:
    total = weights.sum()
    if total <= 0:
        return np.zeros_like(weights)
    return weights / total


def project(model: TopicModel, vector) -> np.ndarray:
    """Non-negative least squares fit of ``vector`` against the topic-term factor."""
    v = np.asarray(vector.todense() if sp.issparse(vector) else vector, dtype=float).ravel()
    H = model.topic_term
    if not v.any():
        return np.zeros(model.n_topics)
    h = np.ones(model.n_topics)
    num = H @ v
    gram = H @ H.T
    for _ in range(_PROJECTION_ITER):
        h *= num / (gram @ h + _EPS)
    return h


def paper_theta(model: TopicModel, doc) -> np.ndarray:
    """Topic proportions of a training row index, or of an unseen tf-idf vector."""
    if isinstance(doc, (int, np.integer)):
        weights = model.doc_topic[int(doc)]
    else:
        weights = project(model, doc)
    return _normalize(np.asarray(weights, dtype=float))


def corpus_theta(
    corpus: Corpus,
    model: TopicModel,
    stopwords: Iterable[str],
    threshold: float = 0.10,
) -> dict[str, np.ndarray]:
    """θ for every English paper of ``corpus``.

    Training documents reuse their factor rows; the rest (e.g. title-only
    papers) are vectorized with the trained vocabulary and projected.
    Non-English papers are left out and so carry no topic weight.
    """
    if model.vocabulary is None:
        raise ParameterError("model has no vocabulary; refit or load with one")
    sw = frozenset(stopwords)
    english = english_mask(corpus, sw, threshold)
    theta = {}
    for rec in corpus:
        if not english[rec.paper_id]:
            continue
        row = model.doc_row(rec.paper_id)
        if row is not None:
            theta[rec.paper_id] = paper_theta(model, row)
        else:
            theta[rec.paper_id] = paper_theta(model, vectorize(model.vocabulary, rec, sw))
    return theta


def author_theta(
    corpus: Corpus,
    theta: Mapping[str, np.ndarray],
    author: str,
    year: int,
    window: int = DEFAULT_WINDOW,
    n_topics: int | None = None,
) -> np.ndarray:
    if n_topics is None:
        n_topics = len(next(iter(theta.values())))
    out = np.zeros(n_topics)
    for pid in sorted(select(corpus, author, year, window)):
        vec = theta.get(pid)
        if vec is not None:
            out += vec
    return out


def top_terms(model: TopicModel, topic: int, k: int = 5) -> list[str]:
    if not 0 <= topic < model.n_topics:
        raise ParameterError(f"topic {topic} out of range [0, {model.n_topics})")
    weights = model.topic_term[topic]
    order = sorted(range(len(weights)), key=lambda j: (-weights[j], model.terms[j]))
    return [model.terms[j] for j in order[:k]]


def topic_label(model: TopicModel, topic: int, k: int = 5) -> str:
    return ", ".join(top_terms(model, topic, k))


# -- persistence ------------------------------------------------------------

def save_model(model: TopicModel, directory: str | Path) -> None:
    """Write ``topic_term.tsv``, ``doc_topic.tsv`` and ``meta``; floats use repr."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    with open(d / "topic_term.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("topic\tterm\tweight\n")
        for t in range(model.n_topics):
            for j, term in enumerate(model.terms):
                fh.write(f"{t}\t{term}\t{float(model.topic_term[t, j])!r}\n")
    with open(d / "doc_topic.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("doc\ttopic\tweight\n")
        for i, doc in enumerate(model.doc_ids):
            for t in range(model.n_topics):
                fh.write(f"{doc}\t{t}\t{float(model.doc_topic[i, t])!r}\n")
    with open(d / "meta", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"n_topics={model.n_topics}\n")
        fh.write(f"seed={model.seed}\n")
        fh.write(f"iterations={model.iterations}\n")
        fh.write(f"final_error={model.final_error!r}\n")
        fh.write("error_trace=" + ",".join(repr(float(e)) for e in model.training_error_trace) + "\n")
        if model.vocabulary is not None:
            v = model.vocabulary
            fh.write(f"n_documents={v.n_documents}\n")
            fh.write("document_frequency=" + ",".join(str(int(x)) for x in v.document_frequency) + "\n")


def load_model(directory: str | Path) -> TopicModel:
    d = Path(directory)
    meta = {}
    for line in (d / "meta").read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition("=")
        meta[key] = value
    n_topics = int(meta["n_topics"])

    terms: list[str] = []
    term_idx: dict[str, int] = {}
    cells = []
    with open(d / "topic_term.tsv", encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            t, term, w = line.rstrip("\n").split("\t")
            if term not in term_idx:
                term_idx[term] = len(terms)
                terms.append(term)
            cells.append((int(t), term_idx[term], float(w)))
    H = np.zeros((n_topics, len(terms)))
    for t, j, w in cells:
        H[t, j] = w

    docs: list[str] = []
    doc_idx: dict[str, int] = {}
    cells = []
    with open(d / "doc_topic.tsv", encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            doc, t, w = line.rstrip("\n").split("\t")
            if doc not in doc_idx:
                doc_idx[doc] = len(docs)
                docs.append(doc)
            cells.append((doc_idx[doc], int(t), float(w)))
    W = np.zeros((len(docs), n_topics))
    for i, t, w in cells:
        W[i, t] = w

    trace = tuple(float(x) for x in meta["error_trace"].split(",")) if meta.get("error_trace") else ()
    vocab = None
    if "document_frequency" in meta:
        dfs = meta["document_frequency"]
        df = np.array([int(x) for x in dfs.split(",")] if dfs else [], dtype=np.int64)
        vocab = Vocabulary(tuple(terms), df, int(meta["n_documents"]))
    return TopicModel(n_topics, H, W, tuple(docs), tuple(terms), trace, int(meta["seed"]), vocab)
