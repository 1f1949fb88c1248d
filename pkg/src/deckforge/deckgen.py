"""Slide-deck assembly and emission (Markdown, deck JSON, PPTX).

One content slide per summarized section, each carrying a hyperlink back
to its source section anchor and a narration string for the audio stage.
All emitters are deterministic: the same deck yields the same bytes.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from . import openxml
from .docmodel import Document, section_anchor
from .errors import DeckTooLargeError, SummarySectionMismatchError
from .summarize import Summary

log = logging.getLogger(__name__)

MAX_SLIDES = 999

_CITATION_RE = re.compile(r"\s*\[\d+(?:\s*,\s*\d+)*\]")


@dataclass
class Slide:
    index: int
    title: str
    bullets: list[tuple[str, int]]  # (text, indent level 0..2)
    hyperlink: str
    narration: str


@dataclass
class SlideDeck:
    title_slide: tuple[str, list[str]]  # (title, authors)
    slides: list[Slide] = field(default_factory=list)
    source_doc_ref: str = ""


def strip_citations(text: str) -> str:
    """Remove bracketed citation markers like "[3]" or "[1, 2]"."""
    return re.sub(r"\s{2,}", " ", _CITATION_RE.sub("", text)).strip()


def make_narration(title: str, bullet_texts: list[str]) -> str:
    parts = [strip_citations(b) for b in bullet_texts]
    spoken = "; ".join(p for p in parts if p)
    title_clean = strip_citations(title)
    if not spoken:
        return title_clean
    return f"{title_clean}. {spoken}" if title_clean else spoken


def build_deck(
    doc: Document,
    summaries: list[Summary],
    base_url: str = "",
    source_doc_ref: str | None = None,
) -> SlideDeck:
    """Assemble the deck: title slide plus one slide per summarized section.

    ``summaries`` must line up one-to-one with the sections that have at
    least one sentence; sentence-less sections are skipped (and logged).
    Bullet indent comes from the section level, clamped to 0..2.
    """
    expected = [s.index for s in doc.sections if s.sentences]
    got = [summary.section_index for summary in summaries]
    if got != expected:
        raise SummarySectionMismatchError(
            f"summaries cover sections {got}, document needs {expected}"
        )
    for section in doc.sections:
        if not section.sentences:
            log.info("section %d (%r) has no sentences; skipped", section.index, section.heading)

    slides = []
    for summary in summaries:
        section = doc.sections[summary.section_index]
        indent = min(max(section.level - 1, 0), 2)
        bullet_texts = [section.sentences[i].text for i, _ in summary.selected]
        title = section.heading or f"Section {section.index + 1}"
        slides.append(
            Slide(
                index=len(slides),
                title=title,
                bullets=[(text, indent) for text in bullet_texts],
                hyperlink=f"{base_url}#{section_anchor(doc, section.index)}",
                narration=make_narration(title, bullet_texts),
            )
        )
    if source_doc_ref is None:
        source_doc_ref = base_url or doc.title
    return SlideDeck(
        title_slide=(doc.title, list(doc.authors)),
        slides=slides,
        source_doc_ref=source_doc_ref,
    )


# ---------------------------------------------------------------------------
# Markdown


def _escape_heading_text(text: str) -> str:
    text = text.replace("\n", " ")
    return "\\" + text if text.startswith("#") else text


def _escape_bullet_text(text: str) -> str:
    text = text.replace("\n", " ")
    return "\\" + text if text.startswith("#") else text


def emit_markdown(deck: SlideDeck) -> str:
    """CommonMark rendering: `##` per slide, dashed bullets, trailing link."""
    title, authors = deck.title_slide
    lines = [f"# {_escape_heading_text(title)}", ""]
    if authors:
        lines += [", ".join(a.replace("\n", " ") for a in authors), ""]
    for slide in deck.slides:
        lines += [f"## {_escape_heading_text(slide.title)}", ""]
        if slide.bullets:
            for text, indent in slide.bullets:
                lines.append("  " * indent + f"- {_escape_bullet_text(text)}")
            lines.append("")
        lines += [f"[Source]({slide.hyperlink})", ""]
    return "\n".join(lines).rstrip("\n") + "\n"


# ---------------------------------------------------------------------------
# Deck JSON


def emit_deck_json(deck: SlideDeck) -> bytes:
    """Canonical JSON bytes: sorted keys, UTF-8, LF, two-space indent."""
    obj = {
        "title_slide": {"title": deck.title_slide[0], "authors": deck.title_slide[1]},
        "source_doc_ref": deck.source_doc_ref,
        "slides": [
            {
                "index": s.index,
                "title": s.title,
                "bullets": [{"text": t, "indent": lvl} for t, lvl in s.bullets],
                "hyperlink": s.hyperlink,
                "narration": s.narration,
            }
            for s in deck.slides
        ],
    }
    return (json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n").encode(
        "utf-8"
    )


def parse_deck_json(payload: bytes | str) -> SlideDeck:
    if isinstance(payload, bytes):
        payload = payload.decode("utf-8")
    obj = json.loads(payload)
    return SlideDeck(
        title_slide=(obj["title_slide"]["title"], list(obj["title_slide"]["authors"])),
        slides=[
            Slide(
                index=s["index"],
                title=s["title"],
                bullets=[(b["text"], b["indent"]) for b in s["bullets"]],
                hyperlink=s["hyperlink"],
                narration=s["narration"],
            )
            for s in obj["slides"]
        ],
        source_doc_ref=obj["source_doc_ref"],
    )


# ---------------------------------------------------------------------------
# PPTX


def emit_pptx(deck: SlideDeck, out_path) -> None:
    """Write a minimal valid PresentationML package.

    Parts: content types, root rels, presentation(+rels), static master/
    layout/theme, and one slide part per slide (title slide first), each
    content slide carrying its external hyperlink relationship.
    """
    if len(deck.slides) > MAX_SLIDES:
        raise DeckTooLargeError(f"{len(deck.slides)} slides exceeds limit {MAX_SLIDES}")

    total_slides = 1 + len(deck.slides)
    parts: list[tuple[str, str]] = [
        ("[Content_Types].xml", openxml.content_types(total_slides)),
        ("_rels/.rels", openxml.ROOT_RELS),
        ("ppt/presentation.xml", openxml.presentation_xml(total_slides)),
        ("ppt/_rels/presentation.xml.rels", openxml.presentation_rels(total_slides)),
        ("ppt/slideMasters/slideMaster1.xml", openxml.SLIDE_MASTER),
        ("ppt/slideMasters/_rels/slideMaster1.xml.rels", openxml.SLIDE_MASTER_RELS),
        ("ppt/slideLayouts/slideLayout1.xml", openxml.SLIDE_LAYOUT),
        ("ppt/slideLayouts/_rels/slideLayout1.xml.rels", openxml.SLIDE_LAYOUT_RELS),
        ("ppt/theme/theme1.xml", openxml.THEME),
    ]

    title, authors = deck.title_slide
    parts.append(("ppt/slides/slide1.xml", openxml.title_slide_xml(title, authors)))
    parts.append(("ppt/slides/_rels/slide1.xml.rels", openxml.slide_rels(None)))
    for i, slide in enumerate(deck.slides, start=2):
        parts.append(
            (
                f"ppt/slides/slide{i}.xml",
                openxml.content_slide_xml(
                    slide.title, slide.bullets, openxml.HYPERLINK_REL_ID
                ),
            )
        )
        parts.append(
            (f"ppt/slides/_rels/slide{i}.xml.rels", openxml.slide_rels(slide.hyperlink))
        )

    openxml.write_package(parts, out_path)
