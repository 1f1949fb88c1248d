"""
From summaries to a slide deck: Markdown, JSON and PPTX
=======================================================

Builds the deck object (title slide + one slide per section, each with a
source hyperlink and a narration string) and writes all three output
formats into ./demo_output/.
"""

from pathlib import Path

from deckforge import SummaryConfig, build_deck, parse_document
from deckforge.deckgen import emit_deck_json, emit_markdown, emit_pptx
from deckforge.pipeline import fixture_paper_path, summarize_sections

out_dir = Path("demo_output")
out_dir.mkdir(exist_ok=True)

doc = parse_document(fixture_paper_path().read_text(encoding="utf-8"), "markdown")
summaries = summarize_sections(doc, SummaryConfig(seed=42))

# base_url is whatever the hyperlinks should point back to; anchors like
# #sec-3-costs are appended per slide.
deck = build_deck(doc, summaries, base_url="paper.html")

print(f"deck: {deck.title_slide[0]!r}, {len(deck.slides)} content slides")
for slide in deck.slides:
    print(f"  slide {slide.index}: {slide.title!r} -> {slide.hyperlink}")
print("\nnarration for slide 0:")
print(" ", deck.slides[0].narration)

(out_dir / "deck.md").write_text(emit_markdown(deck), encoding="utf-8")
(out_dir / "deck.json").write_bytes(emit_deck_json(deck))
emit_pptx(deck, out_dir / "deck.pptx")
print(f"\nwrote {out_dir}/deck.md, deck.json, deck.pptx")

# Emission is deterministic: running this script twice yields identical bytes.
again = out_dir / "deck_again.pptx"
emit_pptx(deck, again)
same = again.read_bytes() == (out_dir / "deck.pptx").read_bytes()
print(f"pptx bytes reproducible: {same}")
again.unlink()
