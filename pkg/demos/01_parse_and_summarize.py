"""
Parsing a structured document and summarizing its sections
===========================================================

Walks the first half of the pipeline: text goes in, a section tree comes
out, and each section is condensed to a handful of extracted sentences.
"""

from deckforge import SummaryConfig, parse_document
from deckforge.pipeline import fixture_paper_path, summarize_sections

# Parse the bundled sample paper.  Markdown headings become sections;
# sentences keep byte spans into the original text.
text = fixture_paper_path().read_text(encoding="utf-8")
doc = parse_document(text, "markdown")

print(f"title:    {doc.title}")
print(f"sections: {len(doc.sections)}")
for section in doc.sections:
    print(f"  [{section.index}] level {section.level}  {section.heading!r}"
          f"  ({len(section.sentences)} sentences)")

# Summary size scales with section length: K = clamp(ceil(0.2 * n), 3, 7).
cfg = SummaryConfig(strategy="centroid", ratio=0.2, seed=42)
summaries = summarize_sections(doc, cfg)

print("\ncentroid-selected sentences, section by section:")
for summary in summaries:
    section = doc.sections[summary.section_index]
    print(f"\n## {section.heading}")
    for index, score in summary.selected:
        print(f"  - {section.sentences[index].text}  (score {score:.3f})")

# The other two strategies share the same interface; compare their picks
# on the largest section.
largest = max(doc.sections, key=lambda s: len(s.sentences))
for strategy in ("centroid", "textrank"):
    cfg = SummaryConfig(strategy=strategy, seed=42)
    picks = summarize_sections(doc, cfg)
    chosen = next(s for s in picks if s.section_index == largest.index)
    indices = [i for i, _ in chosen.selected]
    print(f"\n{strategy:9s} picks sentences {indices} of section {largest.index}")
