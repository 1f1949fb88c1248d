"""End-to-end orchestration: parse -> summarize -> deck -> narrate -> audio,
plus the corpus evaluation harness and the output manifest.

Artifacts land in a local output directory; ``manifest.txt`` lists every
written file with its SHA-256 so runs can be verified byte-for-byte.
Re-running with identical config and inputs (audio off or stub) produces
identical artifacts.
"""

from __future__ import annotations

import hashlib
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .audio import (
    DspConfig,
    SynthesisClient,
    mel_to_waveform,
    stub_synthesize,
    write_wav,
)
from .deckgen import SlideDeck, build_deck, emit_deck_json, emit_markdown, emit_pptx
from .docmodel import Document, decode_utf8, parse_document
from .errors import (
    EmptyCorpusError,
    PipelineStageError,
    ServiceUnreachableError,
    SynthesisTimeoutError,
    UnpairedDocumentError,
)
from .rougeval import (
    RougeReport,
    compare_strategies,
    comparison_csv,
    mean_report,
    render_comparison,
)
from .summarize import (
    RegressorModel,
    Summary,
    SummaryConfig,
    load_regressor,
    summarize_centroid,
    summarize_regression,
    summarize_textrank,
    train_overlap_regressor,
)
from .textcore import embed_sentences, fit_tfidf, tokenize

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"

_FORMAT_BY_SUFFIX = {".md": "markdown", ".txt": "plain", ".tex": "latex-min"}


@dataclass
class PipelineConfig:
    input_path: str
    source_format: str = "markdown"
    out_dir: str = "out"
    summary: SummaryConfig = field(default_factory=SummaryConfig)
    base_url: str = ""
    audio_mode: str = "off"  # off | stub | service
    endpoint: str = ""
    voice_ref: str = ""
    emit_markdown: bool = True
    emit_json: bool = False
    emit_pptx: bool = False
    dsp: DspConfig = field(default_factory=DspConfig)
    griffin_lim_iters: int = 60
    wrap_untitled: bool = True
    model_path: str = ""  # serialized regressor, required for strategy=regression
    max_workers: int = 4

    def __post_init__(self):
        if not (self.emit_markdown or self.emit_json or self.emit_pptx):
            raise ValueError("at least one emit flag must be set")
        if self.audio_mode not in ("off", "stub", "service"):
            raise ValueError(f"unknown audio mode {self.audio_mode!r}")
        if self.audio_mode == "service" and not self.endpoint:
            raise ValueError("audio mode 'service' requires an endpoint")


@dataclass
class RunReport:
    out_dir: str
    artifacts: list[str] = field(default_factory=list)
    stage_seconds: dict[str, float] = field(default_factory=dict)
    section_count: int = 0
    slide_count: int = 0
    wav_count: int = 0
    audio_errors: list[str] = field(default_factory=list)
    service_unreachable: bool = False
    manifest_path: str = ""


def _stage(name: str):
    """Decorator-free stage wrapper: re-raise with the stage name attached."""

    class _StageContext:
        def __init__(self, report: RunReport):
            self.report = report
            self.started = 0.0

        def __enter__(self):
            self.started = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            self.report.stage_seconds[name] = time.perf_counter() - self.started
            if exc is not None and not isinstance(exc, PipelineStageError):
                raise PipelineStageError(name, exc) from exc
            return False

    return _StageContext


def summarize_sections(
    doc: Document,
    cfg: SummaryConfig,
    regressor: RegressorModel | None = None,
    max_workers: int = 1,
) -> list[Summary]:
    """One summary per section that has sentences, in section order.

    Sections are independent and pure, so they can be summarized
    concurrently (``max_workers``); results are collected in section order
    either way.  Centroid and textrank embed each section on its own.
    Regression predicts with a trained linear model, which requires one
    embedding space for the whole document; the model's dimension must
    match the document-wide vocabulary it was trained against.
    """
    doc_space = None
    if cfg.strategy == "regression":
        if regressor is None:
            raise ValueError("strategy 'regression' needs a trained model (model_path)")
        all_tokens = [
            tokenize(s.text, drop_stopwords=True)
            for section in doc.sections
            for s in section.sentences
        ]
        doc_space = fit_tfidf(all_tokens)

    def summarize_one(section) -> Summary:
        texts = [s.text for s in section.sentences]
        token_lists = [tokenize(t, drop_stopwords=True) for t in texts]
        try:
            space = doc_space or fit_tfidf(token_lists)
            embeddings = embed_sentences(token_lists, space)
        except EmptyCorpusError:
            # nothing but stopwords/punctuation: fall back to leading sentences
            k = cfg.bullet_count(len(texts))
            return Summary(
                section_index=section.index,
                selected=[(i, 0.0) for i in range(k)],
                k=k,
            )
        if cfg.strategy == "centroid":
            return summarize_centroid(texts, embeddings, cfg, section.index)
        if cfg.strategy == "textrank":
            return summarize_textrank(texts, embeddings, cfg, section.index)
        if cfg.strategy == "regression":
            return summarize_regression(texts, embeddings, regressor, cfg, section.index)
        raise ValueError(f"unknown strategy {cfg.strategy!r}")

    sections = [s for s in doc.sections if s.sentences]
    if max_workers > 1 and len(sections) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(summarize_one, sections))
    return [summarize_one(section) for section in sections]


def _render_slide_audio(cfg: PipelineConfig, narration: str, client, voice):
    if cfg.audio_mode == "stub":
        mel = stub_synthesize(narration, cfg.dsp)
    else:
        mel = client.synthesize(narration, voice)
    return mel_to_waveform(
        mel, cfg.dsp, iters=cfg.griffin_lim_iters, seed=cfg.summary.seed
    )


def _audio_stage(cfg: PipelineConfig, deck: SlideDeck, out_dir: Path, report: RunReport):
    client = voice = None
    if cfg.audio_mode == "service":
        client = SynthesisClient(cfg.endpoint)
        reference = Path(cfg.voice_ref).read_bytes() if cfg.voice_ref else b""
        voice = client.enroll(reference)

    def render(slide):
        name = f"slide_{slide.index + 1}.wav"
        wave = _render_slide_audio(cfg, slide.narration, client, voice)
        write_wav(wave, out_dir / name)
        return name

    with ThreadPoolExecutor(max_workers=cfg.max_workers) as pool:
        futures = [(slide, pool.submit(render, slide)) for slide in deck.slides]
        for slide, future in futures:
            try:
                report.artifacts.append(future.result())
                report.wav_count += 1
            except (ServiceUnreachableError, SynthesisTimeoutError) as exc:
                report.service_unreachable = True
                report.audio_errors.append(f"slide {slide.index + 1}: {exc}")
            except Exception as exc:  # deck artifacts must survive audio failures
                report.audio_errors.append(f"slide {slide.index + 1}: {exc}")


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, artifacts: list[str]) -> Path:
    """sha256sum-compatible listing of every artifact, sorted by path."""
    manifest = out_dir / MANIFEST_NAME
    lines = [f"{file_sha256(out_dir / name)}  {name}" for name in sorted(artifacts)]
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return manifest


def verify_manifest(out_dir: str | Path) -> list[str]:
    """Names whose current hash differs from the manifest (or are missing)."""
    out_dir = Path(out_dir)
    mismatches = []
    for line in (out_dir / MANIFEST_NAME).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        recorded, name = line.split(None, 1)
        target = out_dir / name
        if not target.is_file() or file_sha256(target) != recorded:
            mismatches.append(name)
    return mismatches


def run(cfg: PipelineConfig) -> RunReport:
    """Execute the full pipeline; returns the run report.

    Deck artifacts are written before narration starts, so audio failures
    never destroy them; they are recorded in the report instead.
    """
    report = RunReport(out_dir=cfg.out_dir)
    stage = _stage

    with stage("docmodel")(report):
        raw = Path(cfg.input_path).read_bytes()
        text = decode_utf8(raw)
        doc = parse_document(
            text, cfg.source_format, wrap_untitled=cfg.wrap_untitled
        )
        report.section_count = len(doc.sections)

    with stage("summarize")(report):
        regressor = None
        if cfg.summary.strategy == "regression":
            if not cfg.model_path:
                raise ValueError(
                    "strategy 'regression' requires model_path (a trained model file)"
                )
            regressor = load_regressor(cfg.model_path)
        summaries = summarize_sections(
            doc, cfg.summary, regressor, max_workers=cfg.max_workers
        )

    out_dir = Path(cfg.out_dir)
    with stage("deckgen")(report):
        deck = build_deck(doc, summaries, cfg.base_url, source_doc_ref=cfg.input_path)
        report.slide_count = len(deck.slides)
        out_dir.mkdir(parents=True, exist_ok=True)
        if cfg.emit_markdown:
            (out_dir / "deck.md").write_bytes(emit_markdown(deck).encode("utf-8"))
            report.artifacts.append("deck.md")
        if cfg.emit_json:
            (out_dir / "deck.json").write_bytes(emit_deck_json(deck))
            report.artifacts.append("deck.json")
        if cfg.emit_pptx:
            emit_pptx(deck, out_dir / "deck.pptx")
            report.artifacts.append("deck.pptx")

    if cfg.audio_mode != "off":
        with stage("audio")(report):
            try:
                _audio_stage(cfg, deck, out_dir, report)
            except (ServiceUnreachableError, SynthesisTimeoutError) as exc:
                report.service_unreachable = True
                report.audio_errors.append(f"audio stage: {exc}")
            except Exception as exc:
                report.audio_errors.append(f"audio stage: {exc}")

    with stage("manifest")(report):
        report.manifest_path = str(write_manifest(out_dir, report.artifacts))
    return report


# ---------------------------------------------------------------------------
# Evaluation harness


@dataclass
class EvalReport:
    per_document: dict[str, dict[str, RougeReport]]
    means: dict[str, RougeReport]
    paths: list[str] = field(default_factory=list)


def discover_corpus(corpus_dir: str | Path) -> list[tuple[Path, Path]]:
    """Pair documents (X.txt / X.md) with references (X.ref.txt)."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus_dir}")
    docs: dict[str, Path] = {}
    refs: dict[str, Path] = {}
    for path in sorted(corpus_dir.iterdir()):
        if not path.is_file():
            continue
        if path.name.endswith(".ref.txt"):
            refs[path.name[: -len(".ref.txt")]] = path
        elif path.suffix in (".txt", ".md"):
            docs[path.stem] = path
    if not docs:
        raise UnpairedDocumentError(f"no documents found in {corpus_dir}")
    missing_refs = sorted(set(docs) - set(refs))
    if missing_refs:
        raise UnpairedDocumentError(f"documents without references: {missing_refs}")
    orphan_refs = sorted(set(refs) - set(docs))
    if orphan_refs:
        raise UnpairedDocumentError(f"references without documents: {orphan_refs}")
    return [(docs[stem], refs[stem]) for stem in sorted(docs)]


def _load_eval_documents(pairs: list[tuple[Path, Path]]):
    loaded = []
    for doc_path, ref_path in pairs:
        fmt = _FORMAT_BY_SUFFIX.get(doc_path.suffix, "plain")
        doc = parse_document(
            decode_utf8(doc_path.read_bytes()), fmt, wrap_untitled=True
        )
        reference = decode_utf8(ref_path.read_bytes())
        loaded.append((doc_path.stem, doc, reference))
    return loaded


def _train_corpus_regressor(loaded):
    """Fit one corpus-wide embedding space, then ridge weights inside it.

    A linear regressor only transfers between documents when they share an
    embedding space, so the TF-IDF model is fitted over every sentence of
    every corpus document and returned alongside the weights.
    """
    per_doc_filtered = []
    for _, doc, _ in loaded:
        sentences = [s.text for section in doc.sections for s in section.sentences]
        per_doc_filtered.append(
            ([tokenize(s) for s in sentences],
             [tokenize(s, drop_stopwords=True) for s in sentences])
        )
    space = fit_tfidf([toks for _, filtered in per_doc_filtered for toks in filtered])
    corpus = []
    for (raw_tokens, filtered), (_, _, reference) in zip(per_doc_filtered, loaded):
        embeddings = embed_sentences(filtered, space)
        corpus.append((raw_tokens, embeddings, tokenize(reference)))
    return space, train_overlap_regressor(corpus)


def eval_corpus(
    corpus_dir: str | Path,
    strategies: list[str],
    cfg: SummaryConfig | None = None,
    out_dir: str | Path | None = None,
) -> EvalReport:
    """Score every strategy on every corpus document and report means.

    Writes ``report.txt`` (paper-style tables), ``rouge_means.csv`` and
    ``rouge_per_document.csv`` into ``out_dir`` when given.
    """
    cfg = cfg or SummaryConfig()
    pairs = discover_corpus(corpus_dir)
    loaded = _load_eval_documents(pairs)

    regressor = regressor_space = None
    if "regression" in strategies:
        regressor_space, regressor = _train_corpus_regressor(loaded)

    per_document: dict[str, dict[str, RougeReport]] = {}
    for stem, doc, reference in loaded:
        per_document[stem] = compare_strategies(
            doc, reference, strategies, cfg, regressor, regressor_space
        )
    means = {
        name: mean_report([per_document[stem][name] for stem in per_document])
        for name in strategies
    }

    report = EvalReport(per_document=per_document, means=means)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

        text_blocks = ["mean scores over %d documents\n" % len(per_document)]
        text_blocks.append(render_comparison(means))
        for stem in per_document:
            text_blocks.append(f"document: {stem}\n")
            text_blocks.append(render_comparison(per_document[stem]))
        (out_dir / "report.txt").write_text(
            "\n".join(text_blocks), encoding="utf-8", newline="\n"
        )

        (out_dir / "rouge_means.csv").write_text(
            comparison_csv(means), encoding="utf-8", newline="\n"
        )
        per_doc_lines = ["document,metric,strategy,f,p,r"]
        for stem, reports in per_document.items():
            for strategy, rep in reports.items():
                for metric, score in rep.by_metric().items():
                    per_doc_lines.append(
                        f"{stem},{metric},{strategy},"
                        f"{score.f:.6f},{score.p:.6f},{score.r:.6f}"
                    )
        (out_dir / "rouge_per_document.csv").write_text(
            "\n".join(per_doc_lines) + "\n", encoding="utf-8", newline="\n"
        )
        report.paths = [
            str(out_dir / "report.txt"),
            str(out_dir / "rouge_means.csv"),
            str(out_dir / "rouge_per_document.csv"),
        ]
    return report


# ---------------------------------------------------------------------------
# Bundled data


def data_dir() -> Path:
    return Path(__file__).parent / "data"


def bundled_corpus_dir() -> Path:
    """Mini evaluation corpus shipped with the package."""
    return data_dir() / "minicorpus"


def fixture_paper_path() -> Path:
    """Small structured paper used by demos and end-to-end tests."""
    return data_dir() / "fixture" / "sample_paper.md"
