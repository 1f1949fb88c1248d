"""Extractive summarization strategies over a common interface.

All three strategies take the section's sentences plus an embedding matrix
and return a :class:`Summary` of K selected sentence indices, where K
scales with the sentence count between configured bounds.  Strategies are
pure; independent sections can be summarized concurrently.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyCorpusError,
    MalformedHeaderError,
    NegativeWeightError,
    NonSquareError,
)
from .textcore import EmbeddingMatrix, cosine_similarity, kmeans


@dataclass
class SummaryConfig:
    """Knobs shared by every strategy.

    The summary size is K = clamp(ceil(ratio * n_sentences), min_bullets,
    max_bullets), further clamped to the sentence count.
    """

    strategy: str = "centroid"  # centroid | textrank | regression
    ratio: float = 0.2
    min_bullets: int = 3
    max_bullets: int = 7
    seed: int = 42
    damping: float = 0.85
    power_tol: float = 1e-8
    power_max_iter: int = 200

    def __post_init__(self):
        if not 0.0 < self.ratio <= 1.0:
            raise ValueError("ratio must be in (0, 1]")
        if self.min_bullets < 1:
            raise ValueError("min_bullets must be >= 1")
        if self.max_bullets < self.min_bullets:
            raise ValueError("max_bullets must be >= min_bullets")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must be in (0, 1)")
        if self.power_tol <= 0.0:
            raise ValueError("power_tol must be positive")

    def bullet_count(self, n_sentences: int) -> int:
        k = math.ceil(self.ratio * n_sentences)
        k = min(max(k, self.min_bullets), self.max_bullets)
        return min(k, n_sentences)


@dataclass
class Summary:
    """Selected (sentence_index, score) pairs in original sentence order."""

    section_index: int
    selected: list[tuple[int, float]]
    k: int


def _check_rows(sentences: Sequence, embeddings: EmbeddingMatrix) -> int:
    n = len(sentences)
    if n < 1:
        raise ValueError("need at least one sentence")
    if embeddings.rows != n:
        raise DimensionMismatchError(
            f"{embeddings.rows} embedding rows for {n} sentences"
        )
    return n


def _pick_top_k(scores: np.ndarray, k: int) -> list[int]:
    """Indices of the k highest scores; ties go to the lower index."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return sorted(order[:k])


def summarize_centroid(
    sentences: Sequence,
    embeddings: EmbeddingMatrix,
    cfg: SummaryConfig,
    section_index: int = 0,
) -> Summary:
    """Cluster sentence embeddings into K groups and keep, per cluster, the
    sentence closest (Euclidean) to its centroid.  Score is the negated
    distance; ties go to the lower sentence index.
    """
    n = _check_rows(sentences, embeddings)
    k = cfg.bullet_count(n)
    assignment = kmeans(embeddings, k, seed=cfg.seed)
    picked: list[tuple[int, float]] = []
    for j in range(k):
        members = np.flatnonzero(assignment.labels == j)
        dists = np.linalg.norm(
            embeddings.data[members] - assignment.centroids[j], axis=1
        )
        best = members[int(dists.argmin())]  # argmin favors the lowest index
        picked.append((int(best), -float(dists.min())))
    picked.sort(key=lambda pair: pair[0])
    return Summary(section_index=section_index, selected=picked, k=k)


def build_similarity_graph(embeddings: EmbeddingMatrix) -> np.ndarray:
    """Pairwise cosine similarities, clipped at zero, zero diagonal."""
    n = embeddings.rows
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sim = max(0.0, cosine_similarity(embeddings.data[i], embeddings.data[j]))
            w[i, j] = w[j, i] = sim
    return w


def pagerank(
    weights: np.ndarray,
    damping: float = 0.85,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> np.ndarray:
    """Power iteration over a non-negative weighted graph.

    Outgoing weights of each node are normalized to a probability
    distribution (nodes with no outgoing weight spread uniformly), then
    r <- (1-d)/n + d * T^t r is iterated until the L1 change drops below
    ``tol`` or ``max_iter`` is hit.  The result is non-negative and sums
    to 1 within 1e-9.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise NonSquareError(f"weight matrix has shape {w.shape}")
    if (w < 0).any():
        raise NegativeWeightError("negative edge weight")
    n = w.shape[0]
    row_sums = w.sum(axis=1, keepdims=True)
    transition = np.where(row_sums > 0, w / np.where(row_sums > 0, row_sums, 1.0), 1.0 / n)
    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        updated = (1.0 - damping) / n + damping * (transition.T @ rank)
        if np.abs(updated - rank).sum() < tol:
            return updated
        rank = updated
    return rank


def summarize_textrank(
    sentences: Sequence,
    embeddings: EmbeddingMatrix,
    cfg: SummaryConfig,
    section_index: int = 0,
) -> Summary:
    """Rank sentences by pagerank over the cosine-similarity graph and keep
    the top K, re-ordered by original position.
    """
    n = _check_rows(sentences, embeddings)
    k = cfg.bullet_count(n)
    graph = build_similarity_graph(embeddings)
    ranks = pagerank(graph, cfg.damping, cfg.power_tol, cfg.power_max_iter)
    chosen = _pick_top_k(ranks, k)
    return Summary(
        section_index=section_index,
        selected=[(i, float(ranks[i])) for i in chosen],
        k=k,
    )


@dataclass
class RegressorModel:
    """Linear model mapping embedding rows to predicted sentence scores."""

    weights: np.ndarray
    bias: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.weights)

    def predict(self, embeddings: EmbeddingMatrix) -> np.ndarray:
        if embeddings.dim != self.dim:
            raise DimensionMismatchError(
                f"model dim {self.dim} vs embedding dim {embeddings.dim}"
            )
        return embeddings.data @ self.weights + self.bias


def overlap_score(sentence_tokens: list[str], reference_tokens: list[str]) -> float:
    """Fraction of the sentence's token multiset that appears in the reference."""
    if not sentence_tokens:
        return 0.0
    sent = Counter(sentence_tokens)
    ref = Counter(reference_tokens)
    matched = sum(min(c, ref[t]) for t, c in sent.items())
    return matched / len(sentence_tokens)


def train_overlap_regressor(
    corpus: Sequence[tuple[list[list[str]], EmbeddingMatrix, list[str]]],
    ridge_lambda: float = 1.0,
) -> RegressorModel:
    """Fit ridge regression from embeddings to reference-overlap scores.

    Each corpus entry is (sentence token lists, embeddings, reference
    summary tokens).  The target for a sentence is the clipped-count token
    overlap with the reference divided by the sentence length.  Weights
    solve (X^t X + lambda I) w = X^t y; no intercept is fitted.
    """
    if not corpus:
        raise EmptyCorpusError("no training documents")
    dim = corpus[0][1].dim
    xs, ys = [], []
    for sent_tokens, embeddings, ref_tokens in corpus:
        if embeddings.dim != dim:
            raise DimensionMismatchError(
                f"embedding dim {embeddings.dim} differs from first document ({dim})"
            )
        if embeddings.rows != len(sent_tokens):
            raise DimensionMismatchError(
                f"{embeddings.rows} embedding rows for {len(sent_tokens)} sentences"
            )
        xs.append(embeddings.data)
        ys.extend(overlap_score(toks, ref_tokens) for toks in sent_tokens)
    x = np.vstack(xs)
    y = np.asarray(ys)
    gram = x.T @ x + ridge_lambda * np.eye(dim)
    weights = np.linalg.solve(gram, x.T @ y)
    return RegressorModel(weights=weights, bias=0.0)


def summarize_regression(
    sentences: Sequence,
    embeddings: EmbeddingMatrix,
    model: RegressorModel,
    cfg: SummaryConfig,
    section_index: int = 0,
) -> Summary:
    """Keep the K sentences with the highest predicted scores."""
    n = _check_rows(sentences, embeddings)
    k = cfg.bullet_count(n)
    scores = model.predict(embeddings)
    chosen = _pick_top_k(scores, k)
    return Summary(
        section_index=section_index,
        selected=[(i, float(scores[i])) for i in chosen],
        k=k,
    )


def save_regressor(model: RegressorModel, path: str | Path) -> None:
    """Serialize as a 1-row sidecar embedding matrix plus a bias line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"1 {model.dim}\n")
        fh.write(" ".join(repr(float(v)) for v in model.weights) + "\n")
        fh.write(repr(float(model.bias)) + "\n")


def load_regressor(path: str | Path) -> RegressorModel:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"regressor file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    lines = [ln for ln in lines if ln.strip()]
    if len(lines) != 3:
        raise MalformedHeaderError(f"{path}: expected header, weights and bias lines")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "1":
        raise MalformedHeaderError(f"{path}: header must be '1 <dim>'")
    dim = int(head[1])
    weights = np.asarray([float(v) for v in lines[1].split()])
    if len(weights) != dim:
        raise DimensionMismatchError(f"{path}: {len(weights)} weights, header says {dim}")
    return RegressorModel(weights=weights, bias=float(lines[2]))
