"""deckforge: structured documents -> summarized slide decks with narration.

The library is organized around small pure modules:

* :mod:`deckforge.docmodel`  -- parsing into a section/sentence tree
* :mod:`deckforge.textcore`  -- tokens, TF-IDF embeddings, k-means
* :mod:`deckforge.summarize` -- centroid / textrank / regression strategies
* :mod:`deckforge.rougeval`  -- ROUGE-1/2/L scoring and comparison tables
* :mod:`deckforge.deckgen`   -- slide decks and Markdown/JSON/PPTX emission
* :mod:`deckforge.audio`     -- Griffin-Lim vocoder, WAV output, synthesis client
* :mod:`deckforge.pipeline`  -- end-to-end runs and the evaluation harness
"""

from .deckgen import Slide, SlideDeck, build_deck, emit_deck_json, emit_markdown, emit_pptx
from .docmodel import Document, Section, Sentence, SourceSpan, parse_document, segment_sentences
from .pipeline import PipelineConfig, RunReport, eval_corpus, run
from .rougeval import RougeReport, RougeScore, compare_strategies, rouge_l, rouge_n
from .summarize import (
    RegressorModel,
    Summary,
    SummaryConfig,
    pagerank,
    summarize_centroid,
    summarize_regression,
    summarize_textrank,
    train_overlap_regressor,
)
from .textcore import (
    ClusterAssignment,
    EmbeddingMatrix,
    TfIdfModel,
    cosine_similarity,
    embed_sentences,
    fit_tfidf,
    kmeans,
    load_external_embeddings,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Document",
    "Section",
    "Sentence",
    "SourceSpan",
    "parse_document",
    "segment_sentences",
    "ClusterAssignment",
    "EmbeddingMatrix",
    "TfIdfModel",
    "cosine_similarity",
    "embed_sentences",
    "fit_tfidf",
    "kmeans",
    "load_external_embeddings",
    "tokenize",
    "RegressorModel",
    "Summary",
    "SummaryConfig",
    "pagerank",
    "summarize_centroid",
    "summarize_regression",
    "summarize_textrank",
    "train_overlap_regressor",
    "RougeReport",
    "RougeScore",
    "compare_strategies",
    "rouge_l",
    "rouge_n",
    "Slide",
    "SlideDeck",
    "build_deck",
    "emit_deck_json",
    "emit_markdown",
    "emit_pptx",
    "PipelineConfig",
    "RunReport",
    "eval_corpus",
    "run",
    "__version__",
]
