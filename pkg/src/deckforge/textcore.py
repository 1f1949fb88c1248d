"""Numeric substrate for the summarizers: tokens, TF-IDF vectors,
externally computed embedding files, cosine similarity and k-means.

Everything here is pure and re-entrant; k-means draws from its own seeded
generator and never touches global random state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyCorpusError,
    EmptyInputError,
    KTooLargeError,
    MalformedHeaderError,
    NonFiniteValueError,
)

# Compact English stopword list; applied only when requested by the caller.
STOPWORDS = frozenset(
    """a about above after again all am an and any are as at be because been
    before being below between both but by can did do does doing down during
    each few for from further had has have having he her here hers him his
    how i if in into is it its itself just me more most my no nor not now of
    off on once only or other our ours out over own same she should so some
    such than that the their theirs them then there these they this those
    through to too under until up very was we were what when where which
    while who whom why will with you your yours""".split()
)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str, drop_stopwords: bool = False) -> list[str]:
    """Lowercased alphanumeric tokens; optionally filtered by the stopword list."""
    tokens = _TOKEN_RE.findall(text.lower())
    if drop_stopwords:
        tokens = [t for t in tokens if t not in STOPWORDS]
    return tokens


@dataclass
class TfIdfModel:
    """Vocabulary plus smoothed inverse document frequencies.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the N fitted documents.
    """

    vocabulary: dict[str, int]
    idf: np.ndarray
    doc_count: int

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


@dataclass
class EmbeddingMatrix:
    """Row-per-sentence real matrix from a named backend."""

    data: np.ndarray
    backend: str  # "tfidf" | "external"

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass
class ClusterAssignment:
    k: int
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    # inertia after each Lloyd iteration, for monotonicity checks
    inertia_history: list[float] = field(default_factory=list)


def fit_tfidf(docs: list[list[str]]) -> TfIdfModel:
    """Fit vocabulary and idf over token lists (one list per document).

    Column order is the sorted vocabulary, so fitting is deterministic.
    """
    if not docs:
        raise EmptyCorpusError("no documents to fit")
    vocab_terms = sorted({t for doc in docs for t in doc})
    if not vocab_terms:
        raise EmptyCorpusError("documents contain no tokens")
    vocabulary = {t: i for i, t in enumerate(vocab_terms)}
    df = np.zeros(len(vocab_terms))
    for doc in docs:
        for t in set(doc):
            df[vocabulary[t]] += 1
    n = len(docs)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return TfIdfModel(vocabulary=vocabulary, idf=idf, doc_count=n)


def embed_sentences(sentences: list[list[str]], model: TfIdfModel) -> EmbeddingMatrix:
    """tf*idf rows over the model vocabulary, L2-normalized.

    Sentences with no in-vocabulary token stay as all-zero rows.
    """
    data = np.zeros((len(sentences), model.dim))
    for i, tokens in enumerate(sentences):
        for t in tokens:
            j = model.vocabulary.get(t)
            if j is not None:
                data[i, j] += 1.0
        data[i] *= model.idf
        norm = np.linalg.norm(data[i])
        if norm > 0:
            data[i] /= norm
    return EmbeddingMatrix(data=data, backend="tfidf")


def load_external_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Load a sidecar embedding file.

    Format: first line ``<rows> <dim>``, then one line per row holding
    ``dim`` space-separated decimal floats (UTF-8, LF line endings).
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"embedding file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in (raw.rstrip("\n") for raw in fh) if ln.strip()]
    if not lines:
        raise MalformedHeaderError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise MalformedHeaderError(f"{path}: header must be '<rows> <dim>'")
    try:
        rows, dim = int(head[0]), int(head[1])
    except ValueError:
        raise MalformedHeaderError(f"{path}: non-integer header fields") from None
    if rows < 0 or dim < 1:
        raise MalformedHeaderError(f"{path}: header out of range ({rows}x{dim})")
    body = lines[1:]
    if len(body) != rows:
        raise MalformedHeaderError(
            f"{path}: header promises {rows} rows, found {len(body)}"
        )
    data = np.zeros((rows, dim))
    for i, line in enumerate(body):
        parts = line.split()
        if len(parts) != dim:
            raise DimensionMismatchError(
                f"{path}: row {i} has {len(parts)} values, expected {dim}"
            )
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise NonFiniteValueError(f"{path}: row {i} has a non-numeric value") from None
        data[i] = values
    if not np.isfinite(data).all():
        raise NonFiniteValueError(f"{path}: embeddings contain NaN or infinity")
    return EmbeddingMatrix(data=data, backend="external")


def save_embeddings(matrix: np.ndarray, path: str | Path) -> None:
    """Write a matrix in the sidecar embedding format (inverse of loading)."""
    arr = np.asarray(matrix, dtype=float)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{arr.shape[0]} {arr.shape[1]}\n")
        for row in arr:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def cosine_similarity(a, b) -> float:
    """dot(a, b) / (|a| |b|); 0.0 when either vector has zero norm."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"vector shapes differ: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: spread initial centers by squared-distance weight."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[j] = points[idx]
        d2 = np.minimum(d2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def kmeans(
    points: EmbeddingMatrix | np.ndarray,
    k: int,
    seed: int = 42,
    max_iter: int = 100,
) -> ClusterAssignment:
    """Lloyd's algorithm with k-means++ seeding, deterministic for a seed.

    Runs until the assignment reaches a fixpoint or ``max_iter``.  Nearest-
    centroid ties break toward the lowest centroid index.  An empty cluster
    is repaired by stealing the point currently farthest from its centroid.
    """
    data = points.data if isinstance(points, EmbeddingMatrix) else np.asarray(points, float)
    n = data.shape[0]
    if n == 0:
        raise EmptyInputError("no points to cluster")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise KTooLargeError(f"k={k} exceeds number of points ({n})")

    rng = np.random.default_rng(seed)
    centroids = _plus_plus_init(data, k, rng)
    labels = np.full(n, -1, dtype=int)
    history: list[float] = []

    for _ in range(max_iter):
        # squared distances point x centroid; argmin takes the lowest index on ties
        d2 = ((data[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)

        for j in range(k):
            if (new_labels == j).any():
                continue
            # steal the worst-fitting point from a cluster that can spare one
            counts = np.bincount(new_labels, minlength=k)
            eligible = counts[new_labels] > 1
            dist_to_own = d2[np.arange(n), new_labels]
            dist_to_own = np.where(eligible, dist_to_own, -np.inf)
            new_labels[int(dist_to_own.argmax())] = j

        converged = (new_labels == labels).all()
        labels = new_labels
        for j in range(k):
            centroids[j] = data[labels == j].mean(axis=0)
        inertia = float(((data - centroids[labels]) ** 2).sum())
        history.append(inertia)
        if converged:
            break

    return ClusterAssignment(
        k=k,
        labels=labels,
        centroids=centroids,
        inertia=history[-1],
        inertia_history=history,
    )
