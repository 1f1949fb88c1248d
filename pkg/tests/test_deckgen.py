import json
import posixpath
import re
import zipfile
from pathlib import Path
from xml.etree import ElementTree

import pytest

from deckforge.deckgen import (
    Slide,
    SlideDeck,
    build_deck,
    emit_deck_json,
    emit_markdown,
    emit_pptx,
    make_narration,
    parse_deck_json,
    strip_citations,
)
from deckforge.docmodel import parse_document
from deckforge.errors import DeckTooLargeError, SummarySectionMismatchError
from deckforge.summarize import Summary

GOLDEN = Path(__file__).parent / "golden"

REL_NS = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"
PKG_REL_NS = "http://schemas.openxmlformats.org/package/2006/relationships"


def summary_for(section_index, indices):
    return Summary(
        section_index=section_index,
        selected=[(i, 0.0) for i in indices],
        k=len(indices),
    )


def fixture_deck() -> SlideDeck:
    return SlideDeck(
        title_slide=("Tidal Power Survey", ["R. Chen", "A. Okafor"]),
        slides=[
            Slide(
                index=0,
                title="Turbine Siting",
                bullets=[
                    ("Currents above two knots suit fixed turbines.", 0),
                    ("Seabed surveys rule out soft sediment.", 0),
                ],
                hyperlink="https://example.org/doc#sec-1-turbine-siting",
                narration=(
                    "Turbine Siting. Currents above two knots suit fixed turbines; "
                    "Seabed surveys rule out soft sediment"
                ),
            ),
            Slide(
                index=1,
                title="Grid Hookup",
                bullets=[("Subsea cables carry power ashore.", 1)],
                hyperlink="https://example.org/doc#sec-2-grid-hookup",
                narration="Grid Hookup. Subsea cables carry power ashore",
            ),
            Slide(
                index=2,
                title="Open Questions",
                bullets=[],
                hyperlink="https://example.org/doc#sec-3-open-questions",
                narration="Open Questions",
            ),
        ],
        source_doc_ref="https://example.org/doc",
    )


class TestBuildDeck:
    def test_minimal_deck(self):
        doc = parse_document("# Overview\nFirst point. Second point.", "markdown")
        deck = build_deck(doc, [summary_for(0, [0, 1])], base_url="doc.html")
        assert deck.title_slide[0] == "Overview"
        assert len(deck.slides) == 1
        slide = deck.slides[0]
        assert [b[0] for b in slide.bullets] == ["First point.", "Second point."]
        assert slide.hyperlink == "doc.html#sec-0-overview"
        assert slide.narration.startswith("Overview. ")

    def test_hyperlink_uses_section_anchor(self):
        text = "\n".join(f"# S{i}\ncontent {i}." for i in range(6))
        text += "\n# Results\nfindings here."
        doc = parse_document(text, "markdown")
        summaries = [summary_for(i, [0]) for i in range(7)]
        deck = build_deck(doc, summaries, base_url="https://x/p")
        assert deck.slides[6].hyperlink == "https://x/p#sec-6-results"

    def test_mismatched_summaries_rejected(self):
        doc = parse_document("# A\nx.\n# B\ny.", "markdown")
        with pytest.raises(SummarySectionMismatchError):
            build_deck(doc, [summary_for(0, [0])])

    def test_sentence_free_sections_skipped(self):
        doc = parse_document("# A\nx.\n# Empty\n# B\ny.", "markdown")
        assert not doc.sections[1].sentences
        deck = build_deck(doc, [summary_for(0, [0]), summary_for(2, [0])])
        assert [s.title for s in deck.slides] == ["A", "B"]

    def test_indent_follows_section_level(self):
        doc = parse_document("# A\nx.\n## B\ny.\n### C\nz.", "markdown")
        deck = build_deck(doc, [summary_for(i, [0]) for i in range(3)])
        assert [s.bullets[0][1] for s in deck.slides] == [0, 1, 2]

    def test_narration_strips_citation_brackets(self):
        assert strip_citations("Known result [3] holds.") == "Known result holds."
        assert strip_citations("See [1, 2] and [12].") == "See and."
        narration = make_narration("Title [4]", ["Claim [3].", "Proof [1, 5]."])
        assert "[" not in narration
        assert narration == "Title. Claim.; Proof."


class TestMarkdown:
    def test_golden_fixture(self):
        rendered = emit_markdown(fixture_deck())
        assert rendered.encode("utf-8") == (GOLDEN / "deck_fixture.md").read_bytes()

    def test_deterministic(self):
        assert emit_markdown(fixture_deck()) == emit_markdown(fixture_deck())

    def test_empty_bullets_slide_keeps_heading_and_link(self):
        rendered = emit_markdown(fixture_deck())
        assert "## Open Questions\n\n[Source](" in rendered

    def test_leading_hash_escaped_in_title(self):
        deck = fixture_deck()
        deck.slides[0].title = "# Sneaky"
        rendered = emit_markdown(deck)
        assert "## \\# Sneaky" in rendered

    def test_no_emitted_line_starts_with_unescaped_hash_from_content(self):
        deck = fixture_deck()
        deck.title_slide = ("#1 deck", [])
        deck.slides[0].bullets = [("# not a heading", 0), ("line\n# break", 1)]
        for line in emit_markdown(deck).splitlines():
            if line.startswith("#"):
                assert re.match(r"^#{1,2} ", line), line


class TestDeckJson:
    def test_round_trip_identity(self):
        deck = fixture_deck()
        assert parse_deck_json(emit_deck_json(deck)) == deck

    def test_empty_deck(self):
        deck = SlideDeck(title_slide=("T", []), slides=[], source_doc_ref="r")
        payload = emit_deck_json(deck)
        obj = json.loads(payload)
        assert obj["slides"] == []
        assert parse_deck_json(payload) == deck

    def test_canonical_bytes(self):
        deck = fixture_deck()
        payload = emit_deck_json(deck)
        assert payload == emit_deck_json(fixture_deck())
        assert payload.endswith(b"\n") and b"\r" not in payload
        keys = list(json.loads(payload))
        assert keys == sorted(keys)

    def test_non_ascii_preserved(self):
        deck = SlideDeck(title_slide=("Séance — résumé", []), slides=[])
        assert "Séance".encode("utf-8") in emit_deck_json(deck)
        assert parse_deck_json(emit_deck_json(deck)).title_slide[0].startswith("Séance")


def load_pptx_parts(path):
    with zipfile.ZipFile(path) as zf:
        return {name: zf.read(name) for name in zf.namelist()}


def assert_valid_pptx(path):
    """Structural oracle: every part parses, every referenced rel resolves."""
    parts = load_pptx_parts(path)
    trees = {}
    for name, payload in parts.items():
        trees[name] = ElementTree.fromstring(payload)  # raises if malformed

    for name, tree in trees.items():
        if name.endswith(".rels"):
            continue
        rels_name = posixpath.join(posixpath.dirname(name), "_rels", posixpath.basename(name) + ".rels")
        declared = {}
        if rels_name in trees:
            for rel in trees[rels_name]:
                declared[rel.get("Id")] = rel
        referenced = set()
        for element in tree.iter():
            for attr, value in element.attrib.items():
                if attr.startswith("{%s}" % REL_NS):
                    referenced.add(value)
        missing = referenced - set(declared)
        assert not missing, f"{name} references unresolved rel ids {missing}"
        # internal relationship targets must exist in the package
        for rel_id, rel in declared.items():
            if rel.get("TargetMode") == "External":
                continue
            target = posixpath.normpath(
                posixpath.join(posixpath.dirname(name), rel.get("Target"))
            )
            assert target in parts, f"{rels_name} -> missing part {target}"
    return parts, trees


class TestPptx:
    def test_package_structure_two_content_slides(self, tmp_path):
        deck = fixture_deck()
        deck.slides = deck.slides[:2]
        out = tmp_path / "deck.pptx"
        emit_pptx(deck, out)
        parts, trees = assert_valid_pptx(out)
        expected = {
            "[Content_Types].xml",
            "_rels/.rels",
            "ppt/presentation.xml",
            "ppt/_rels/presentation.xml.rels",
            "ppt/slideMasters/slideMaster1.xml",
            "ppt/slideMasters/_rels/slideMaster1.xml.rels",
            "ppt/slideLayouts/slideLayout1.xml",
            "ppt/slideLayouts/_rels/slideLayout1.xml.rels",
            "ppt/theme/theme1.xml",
            "ppt/slides/slide1.xml",
            "ppt/slides/_rels/slide1.xml.rels",
            "ppt/slides/slide2.xml",
            "ppt/slides/_rels/slide2.xml.rels",
            "ppt/slides/slide3.xml",
            "ppt/slides/_rels/slide3.xml.rels",
        }
        assert set(parts) == expected
        pres = trees["ppt/presentation.xml"]
        slide_ids = pres.findall(
            "{http://schemas.openxmlformats.org/presentationml/2006/main}sldIdLst/"
            "{http://schemas.openxmlformats.org/presentationml/2006/main}sldId"
        )
        assert len(slide_ids) == 3  # title + 2 content slides

    def test_external_hyperlink_relationship(self, tmp_path):
        out = tmp_path / "deck.pptx"
        emit_pptx(fixture_deck(), out)
        parts, trees = assert_valid_pptx(out)
        rels = trees["ppt/slides/_rels/slide2.xml.rels"]
        targets = {rel.get("Target"): rel.get("TargetMode") for rel in rels}
        assert targets["https://example.org/doc#sec-1-turbine-siting"] == "External"
        assert b"hlinkClick" in parts["ppt/slides/slide2.xml"]

    def test_empty_deck_still_valid(self, tmp_path):
        deck = SlideDeck(title_slide=("Solo", ["One Author"]), slides=[])
        out = tmp_path / "empty.pptx"
        emit_pptx(deck, out)
        parts, trees = assert_valid_pptx(out)
        assert "ppt/slides/slide1.xml" in parts
        assert "ppt/slides/slide2.xml" not in parts

    def test_stable_bytes_across_runs(self, tmp_path):
        a, b = tmp_path / "a.pptx", tmp_path / "b.pptx"
        emit_pptx(fixture_deck(), a)
        emit_pptx(fixture_deck(), b)
        assert a.read_bytes() == b.read_bytes()

    def test_xml_escaping_in_text(self, tmp_path):
        deck = fixture_deck()
        deck.slides[0].title = 'Angle <brackets> & "quotes"'
        deck.slides[0].bullets = [("a < b & c > d", 0)]
        out = tmp_path / "esc.pptx"
        emit_pptx(deck, out)
        assert_valid_pptx(out)

    def test_deck_too_large(self, tmp_path):
        slides = [
            Slide(index=i, title=f"s{i}", bullets=[], hyperlink="", narration="")
            for i in range(1000)
        ]
        deck = SlideDeck(title_slide=("T", []), slides=slides)
        with pytest.raises(DeckTooLargeError):
            emit_pptx(deck, tmp_path / "big.pptx")
