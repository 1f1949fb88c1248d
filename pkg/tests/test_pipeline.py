import pytest

from conftest import mel_payload, read_wav
from deckforge.deckgen import parse_deck_json
from deckforge.errors import PipelineStageError, UnpairedDocumentError
from deckforge.pipeline import (
    PipelineConfig,
    bundled_corpus_dir,
    discover_corpus,
    eval_corpus,
    fixture_paper_path,
    run,
    summarize_sections,
    verify_manifest,
    write_manifest,
)
from deckforge.docmodel import parse_document
from deckforge.summarize import SummaryConfig

SAMPLE = """# Ferry Routes

The harbor ferry links three districts. Crossings take nine minutes. Boats leave every quarter hour. Night service runs on weekends.

## Ticketing

A single fare covers all routes. Passes are sold on the pier. Children ride free on Sundays.
"""


@pytest.fixture
def sample_input(tmp_path):
    path = tmp_path / "doc.md"
    path.write_text(SAMPLE, encoding="utf-8")
    return path


def base_config(sample_input, tmp_path, **overrides) -> PipelineConfig:
    defaults = dict(
        input_path=str(sample_input),
        source_format="markdown",
        out_dir=str(tmp_path / "out"),
        emit_markdown=True,
    )
    defaults.update(overrides)
    return PipelineConfig(**defaults)


class TestConfigValidation:
    def test_requires_an_emit_flag(self, sample_input, tmp_path):
        with pytest.raises(ValueError):
            base_config(sample_input, tmp_path, emit_markdown=False)

    def test_service_mode_needs_endpoint(self, sample_input, tmp_path):
        with pytest.raises(ValueError):
            base_config(sample_input, tmp_path, audio_mode="service")

    def test_unknown_audio_mode(self, sample_input, tmp_path):
        with pytest.raises(ValueError):
            base_config(sample_input, tmp_path, audio_mode="loud")


class TestRun:
    def test_markdown_only_run(self, sample_input, tmp_path):
        cfg = base_config(sample_input, tmp_path)
        report = run(cfg)
        out = tmp_path / "out"
        assert report.artifacts == ["deck.md"]
        assert (out / "deck.md").is_file()
        assert (out / "manifest.txt").is_file()
        assert report.section_count == 2
        assert report.slide_count == 2
        assert set(report.stage_seconds) >= {"docmodel", "summarize", "deckgen", "manifest"}
        assert verify_manifest(out) == []

    def test_missing_input_annotated_with_stage(self, tmp_path):
        cfg = PipelineConfig(
            input_path=str(tmp_path / "nope.md"),
            out_dir=str(tmp_path / "out"),
        )
        with pytest.raises(PipelineStageError) as err:
            run(cfg)
        assert err.value.stage == "docmodel"
        assert str(err.value).startswith("docmodel: FileNotFoundError")

    def test_invalid_utf8_rejected(self, tmp_path):
        bad = tmp_path / "bad.md"
        bad.write_bytes(b"# ok\n\xff\xfe broken")
        cfg = PipelineConfig(input_path=str(bad), out_dir=str(tmp_path / "out"))
        with pytest.raises(PipelineStageError) as err:
            run(cfg)
        assert err.value.stage == "docmodel"
        assert isinstance(err.value.cause, UnicodeDecodeError)

    def test_stub_audio_writes_wav_per_content_slide(self, sample_input, tmp_path):
        cfg = base_config(
            sample_input, tmp_path, audio_mode="stub", emit_json=True
        )
        report = run(cfg)
        out = tmp_path / "out"
        assert report.wav_count == 2
        assert (out / "slide_1.wav").is_file()
        assert (out / "slide_2.wav").is_file()
        rate, samples = read_wav(out / "slide_1.wav")
        assert rate == 16000
        assert samples.size > 0
        deck = parse_deck_json((out / "deck.json").read_bytes())
        assert len(deck.slides) == 2

    def test_stub_audio_deterministic_across_runs(self, sample_input, tmp_path):
        cfg_a = base_config(sample_input, tmp_path, audio_mode="stub",
                            out_dir=str(tmp_path / "a"))
        cfg_b = base_config(sample_input, tmp_path, audio_mode="stub",
                            out_dir=str(tmp_path / "b"))
        run(cfg_a)
        run(cfg_b)
        manifest_a = (tmp_path / "a" / "manifest.txt").read_text()
        manifest_b = (tmp_path / "b" / "manifest.txt").read_text()
        assert manifest_a == manifest_b

    def test_manifest_detects_tampering(self, sample_input, tmp_path):
        cfg = base_config(sample_input, tmp_path)
        run(cfg)
        target = tmp_path / "out" / "deck.md"
        target.write_text(target.read_text() + "tampered", encoding="utf-8")
        assert verify_manifest(tmp_path / "out") == ["deck.md"]

    def test_manifest_detects_missing_file(self, tmp_path):
        out = tmp_path / "m"
        out.mkdir()
        (out / "a.txt").write_text("hello")
        write_manifest(out, ["a.txt"])
        (out / "a.txt").unlink()
        assert verify_manifest(out) == ["a.txt"]

    def test_regression_strategy_requires_model(self, sample_input, tmp_path):
        cfg = base_config(
            sample_input, tmp_path, summary=SummaryConfig(strategy="regression")
        )
        with pytest.raises(PipelineStageError) as err:
            run(cfg)
        assert err.value.stage == "summarize"

    def test_regression_build_with_trained_model(self, sample_input, tmp_path):
        from deckforge.rougeval import document_sentences
        from deckforge.summarize import save_regressor, train_overlap_regressor
        from deckforge.textcore import embed_sentences, fit_tfidf, tokenize

        doc = parse_document(sample_input.read_text(encoding="utf-8"), "markdown")
        sentences = document_sentences(doc)
        filtered = [tokenize(s, drop_stopwords=True) for s in sentences]
        space = fit_tfidf(filtered)
        embeddings = embed_sentences(filtered, space)
        reference = tokenize("A single fare covers all routes.")
        model = train_overlap_regressor(
            [([tokenize(s) for s in sentences], embeddings, reference)]
        )
        model_path = tmp_path / "model.txt"
        save_regressor(model, model_path)

        cfg = base_config(
            sample_input,
            tmp_path,
            summary=SummaryConfig(strategy="regression"),
            model_path=str(model_path),
        )
        report = run(cfg)
        assert report.slide_count == 2
        assert (tmp_path / "out" / "deck.md").is_file()

    def test_service_audio_end_to_end(self, sample_input, tmp_path, synth_service):
        synth_service.responses["/embed"] = [(200, {"voice_id": "v1"})]
        synth_service.responses["/synthesize"] = [(200, mel_payload(12, 80))]
        voice_ref = tmp_path / "ref.wav"
        voice_ref.write_bytes(b"RIFF fake")
        cfg = base_config(
            sample_input,
            tmp_path,
            audio_mode="service",
            endpoint=synth_service.url,
            voice_ref=str(voice_ref),
        )
        report = run(cfg)
        assert report.wav_count == 2
        assert report.audio_errors == []
        paths = {p for p, _ in synth_service.requests}
        assert paths == {"/embed", "/synthesize"}

    def test_service_unreachable_keeps_deck_artifacts(self, sample_input, tmp_path):
        cfg = base_config(
            sample_input,
            tmp_path,
            audio_mode="service",
            endpoint="http://127.0.0.1:9",
        )
        report = run(cfg)
        assert report.service_unreachable
        assert report.audio_errors
        assert (tmp_path / "out" / "deck.md").is_file()
        assert verify_manifest(tmp_path / "out") == []


class TestSummarizeSections:
    def test_one_summary_per_nonempty_section(self):
        doc = parse_document("# A\nx. y. z.\n# Empty\n# B\nw.", "markdown")
        summaries = summarize_sections(doc, SummaryConfig())
        assert [s.section_index for s in summaries] == [0, 2]

    def test_stopword_only_section_falls_back_to_leading_sentences(self):
        doc = parse_document("# A\nThe of and. A an the.", "markdown")
        summaries = summarize_sections(doc, SummaryConfig())
        assert summaries[0].selected[0][0] == 0


class TestEvalCorpus:
    def test_bundled_corpus_tables_and_csv(self, tmp_path):
        out = tmp_path / "report"
        report = eval_corpus(
            bundled_corpus_dir(),
            ["centroid", "textrank", "random"],
            SummaryConfig(seed=42),
            out_dir=out,
        )
        assert len(report.per_document) >= 5
        text = (out / "report.txt").read_text()
        assert "strategy: centroid" in text
        for line in ("rouge-1", "rouge-2", "rouge-l"):
            assert line in text
        means_csv = (out / "rouge_means.csv").read_text().splitlines()
        assert means_csv[0] == "metric,strategy,f,p,r"
        assert len(means_csv) == 1 + 3 * 3
        per_doc = (out / "rouge_per_document.csv").read_text().splitlines()
        assert per_doc[0] == "document,metric,strategy,f,p,r"
        assert len(per_doc) == 1 + len(report.per_document) * 9

    def test_verbatim_strategy_scores_one(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        (corpus / "one.txt").write_text("Single sentence document.", encoding="utf-8")
        (corpus / "one.ref.txt").write_text("Single sentence document.", encoding="utf-8")
        report = eval_corpus(corpus, ["centroid"], SummaryConfig())
        assert report.means["centroid"].rougeL.f == pytest.approx(1.0)

    def test_empty_corpus_dir(self, tmp_path):
        empty = tmp_path / "corpus"
        empty.mkdir()
        with pytest.raises(UnpairedDocumentError):
            discover_corpus(empty)

    def test_document_without_reference(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        (corpus / "doc.txt").write_text("Content here.", encoding="utf-8")
        with pytest.raises(UnpairedDocumentError):
            discover_corpus(corpus)

    def test_reference_without_document(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        (corpus / "ghost.ref.txt").write_text("Ref.", encoding="utf-8")
        with pytest.raises(UnpairedDocumentError):
            discover_corpus(corpus)

    def test_regression_strategy_trains_on_corpus(self):
        report = eval_corpus(
            bundled_corpus_dir(), ["regression"], SummaryConfig(seed=42)
        )
        assert 0.0 <= report.means["regression"].rougeL.f <= 1.0


class TestBundledData:
    def test_fixture_paper_parses(self):
        text = fixture_paper_path().read_text(encoding="utf-8")
        doc = parse_document(text, "markdown")
        assert len(doc.sections) >= 4
        assert all(s.sentences for s in doc.sections)
