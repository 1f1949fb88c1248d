"""ROUGE-1/2/L scoring and the strategy-comparison harness.

Scores are reported as (f, p, r) triples.  Summary-level rouge-l runs the
LCS over the concatenated token sequences of candidate and reference (no
union-LCS).  Tokenization keeps stopwords.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .docmodel import Document
from .summarize import (
    RegressorModel,
    Summary,
    SummaryConfig,
    summarize_centroid,
    summarize_regression,
    summarize_textrank,
    train_overlap_regressor,
)
from .textcore import TfIdfModel, embed_sentences, fit_tfidf, tokenize

DEFAULT_BETA = 1.0

METRIC_NAMES = ("rouge-1", "rouge-2", "rouge-l")


@dataclass(frozen=True)
class RougeScore:
    f: float
    p: float
    r: float


@dataclass(frozen=True)
class RougeReport:
    rouge1: RougeScore
    rouge2: RougeScore
    rougeL: RougeScore

    def by_metric(self) -> dict[str, RougeScore]:
        return {"rouge-1": self.rouge1, "rouge-2": self.rouge2, "rouge-l": self.rougeL}


def f_score(p: float, r: float, beta: float = DEFAULT_BETA) -> float:
    if p + r == 0.0:
        return 0.0
    b2 = beta * beta
    return (1.0 + b2) * p * r / (r + b2 * p)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(
    candidate: Sequence[str],
    reference: Sequence[str],
    n: int,
    beta: float = DEFAULT_BETA,
) -> RougeScore:
    """Clipped n-gram overlap: each candidate n-gram counts at most as often
    as it occurs in the reference.  Empty n-gram sets give all zeros.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngram_counts(candidate, n)
    ref = _ngram_counts(reference, n)
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    if cand_total == 0 or ref_total == 0:
        return RougeScore(0.0, 0.0, 0.0)
    matches = sum(min(count, ref[gram]) for gram, count in cand.items())
    p = matches / cand_total
    r = matches / ref_total
    return RougeScore(f_score(p, r, beta), p, r)


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Longest common subsequence via the usual dynamic program."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[len(b)]


def rouge_l(
    candidate: Sequence[str],
    reference: Sequence[str],
    beta: float = DEFAULT_BETA,
) -> RougeScore:
    """LCS-based score over the full token sequences."""
    if not candidate or not reference:
        return RougeScore(0.0, 0.0, 0.0)
    length = lcs_length(candidate, reference)
    p = length / len(candidate)
    r = length / len(reference)
    return RougeScore(f_score(p, r, beta), p, r)


def score_summary(
    candidate_tokens: Sequence[str],
    reference_tokens: Sequence[str],
    beta: float = DEFAULT_BETA,
) -> RougeReport:
    return RougeReport(
        rouge1=rouge_n(candidate_tokens, reference_tokens, 1, beta),
        rouge2=rouge_n(candidate_tokens, reference_tokens, 2, beta),
        rougeL=rouge_l(candidate_tokens, reference_tokens, beta),
    )


# ---------------------------------------------------------------------------
# Strategy comparison harness


def document_sentences(doc: Document) -> list[str]:
    """All sentence texts of the document, in reading order."""
    return [s.text for section in doc.sections for s in section.sentences]


def random_selection(n_sentences: int, cfg: SummaryConfig) -> Summary:
    """Seeded uniform baseline: K distinct sentence indices at random."""
    if n_sentences < 1:
        raise ValueError("need at least one sentence")
    k = cfg.bullet_count(n_sentences)
    rng = np.random.default_rng(cfg.seed)
    chosen = sorted(int(i) for i in rng.choice(n_sentences, size=k, replace=False))
    return Summary(section_index=0, selected=[(i, 0.0) for i in chosen], k=k)


def run_strategy(
    name: str,
    sentences: list[str],
    cfg: SummaryConfig,
    regressor: RegressorModel | None = None,
    regressor_space: TfIdfModel | None = None,
) -> Summary:
    """Run one named strategy over a flat sentence list.

    Centroid and textrank embed with a TF-IDF model fitted on these
    sentences (stopwords filtered).  Regression must predict in the same
    embedding space the model was trained in, so a shared ``regressor_space``
    is used when given; without a model, a fallback is trained on the fly
    using the sentences themselves as their own reference.
    """
    if name == "random":
        return random_selection(len(sentences), cfg)
    token_lists = [tokenize(s, drop_stopwords=True) for s in sentences]
    if name == "centroid":
        embeddings = embed_sentences(token_lists, fit_tfidf(token_lists))
        return summarize_centroid(sentences, embeddings, cfg)
    if name == "textrank":
        embeddings = embed_sentences(token_lists, fit_tfidf(token_lists))
        return summarize_textrank(sentences, embeddings, cfg)
    if name == "regression":
        space = regressor_space or fit_tfidf(token_lists)
        embeddings = embed_sentences(token_lists, space)
        if regressor is None:
            all_tokens = [t for toks in token_lists for t in toks]
            regressor = train_overlap_regressor([(token_lists, embeddings, all_tokens)])
        return summarize_regression(sentences, embeddings, regressor, cfg)
    raise ValueError(f"unknown strategy {name!r}")


def compare_strategies(
    doc: Document,
    reference_summary: str,
    strategies: Sequence[str],
    cfg: SummaryConfig,
    regressor: RegressorModel | None = None,
    regressor_space: TfIdfModel | None = None,
    beta: float = DEFAULT_BETA,
) -> dict[str, RougeReport]:
    """Score each strategy's document-level summary against the reference.

    The candidate is the concatenation of the selected sentences;
    both sides are tokenized without stopword filtering.
    """
    reference_tokens = tokenize(reference_summary)
    if not reference_tokens:
        raise ValueError("reference summary is empty")
    sentences = document_sentences(doc)
    results: dict[str, RougeReport] = {}
    for name in strategies:
        summary = run_strategy(name, sentences, cfg, regressor, regressor_space)
        candidate = " ".join(sentences[i] for i, _ in summary.selected)
        results[name] = score_summary(tokenize(candidate), reference_tokens, beta)
    return results


def mean_report(reports: Sequence[RougeReport]) -> RougeReport:
    """Arithmetic mean of (f, p, r) per metric across reports."""
    if not reports:
        raise ValueError("no reports to average")

    def avg(scores: list[RougeScore]) -> RougeScore:
        n = len(scores)
        return RougeScore(
            f=sum(s.f for s in scores) / n,
            p=sum(s.p for s in scores) / n,
            r=sum(s.r for s in scores) / n,
        )

    return RougeReport(
        rouge1=avg([r.rouge1 for r in reports]),
        rouge2=avg([r.rouge2 for r in reports]),
        rougeL=avg([r.rougeL for r in reports]),
    )


# ---------------------------------------------------------------------------
# Rendering


def render_rouge_table(report: RougeReport, caption: str | None = None) -> str:
    """Fixed-width table with rouge-1/2/l rows and f, p, r columns."""
    lines = []
    if caption:
        lines.append(caption)
    lines.append(f"{'':9}{'f':>10}{'p':>10}{'r':>10}")
    for name, score in report.by_metric().items():
        lines.append(f"{name:<9}{score.f:>10.6f}{score.p:>10.6f}{score.r:>10.6f}")
    return "\n".join(lines) + "\n"


def render_comparison(reports: Mapping[str, RougeReport]) -> str:
    """One table per strategy, separated by blank lines."""
    blocks = [
        render_rouge_table(report, caption=f"strategy: {name}")
        for name, report in reports.items()
    ]
    return "\n".join(blocks)


def comparison_csv(reports: Mapping[str, RougeReport]) -> str:
    """Machine-readable lines "metric,strategy,f,p,r" (LF, '.' decimals)."""
    lines = ["metric,strategy,f,p,r"]
    for strategy, report in reports.items():
        for metric, score in report.by_metric().items():
            lines.append(
                f"{metric},{strategy},{score.f:.6f},{score.p:.6f},{score.r:.6f}"
            )
    return "\n".join(lines) + "\n"
