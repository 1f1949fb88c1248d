"""Structured-document model: parse text into a section/sentence tree.

Three input formats are supported:

* ``markdown``   -- ``#``..``###`` headings (deeper levels flatten to 3)
* ``latex-min``  -- ``\\section`` / ``\\subsection`` / ``\\subsubsection``
* ``plain``      -- blank-line-delimited ALL-CAPS or numbered heading lines

Every sentence carries a byte span into the original input so downstream
consumers (slide hyperlinks, evaluation) can address the source exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EmptyInputError, NoSectionsFoundError

SUPPORTED_FORMATS = ("plain", "markdown", "latex-min")

# Dotted tokens that do not end a sentence.  Multi-dot entries ("e.g") are
# matched against the full token, single words against the last word only.
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "al", "approx", "ca", "cf", "dept", "dr", "e.g", "ed", "eds", "eq",
        "eqs", "et", "fig", "figs", "i.e", "inc", "jr", "ltd", "mr", "mrs",
        "ms", "mt", "no", "nos", "p", "pp", "prof", "resp", "sec", "secs",
        "sr", "st", "tab", "univ", "vol", "vols", "vs",
    }
)


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range [byte_start, byte_end) into the parse input."""

    byte_start: int
    byte_end: int


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    span: SourceSpan


@dataclass
class Section:
    index: int
    heading: str
    level: int
    paragraphs: list[str] = field(default_factory=list)
    sentences: list[Sentence] = field(default_factory=list)


@dataclass
class Document:
    title: str
    authors: list[str]
    sections: list[Section]
    source_format: str


def _byte_offsets(text: str) -> list[int]:
    """Prefix table mapping character index -> byte offset (UTF-8)."""
    offsets = [0] * (len(text) + 1)
    pos = 0
    for i, ch in enumerate(text):
        offsets[i] = pos
        pos += len(ch.encode("utf-8"))
    offsets[len(text)] = pos
    return offsets


_TERMINAL_RE = re.compile(r"[.!?]+")
_TOKEN_BEFORE_DOT_RE = re.compile(r"([\w.]*\w)$", re.UNICODE)


def _is_abbreviation(prefix: str, abbreviations: frozenset[str]) -> bool:
    m = _TOKEN_BEFORE_DOT_RE.search(prefix)
    if not m:
        return False
    token = m.group(1).lower()
    if token in abbreviations:
        return True
    return token.rsplit(".", 1)[-1] in abbreviations


def _segment_char_spans(
    text: str, abbreviations: frozenset[str]
) -> list[tuple[int, int]]:
    """Sentence spans as (start, end) character offsets, whitespace-trimmed.

    A run of ``.!?`` ends a sentence when it is followed by whitespace and
    an alphanumeric character, or by nothing but trailing whitespace.  A
    single period preceded by a known abbreviation never splits.
    """
    breaks: list[int] = []
    for m in _TERMINAL_RE.finditer(text):
        end = m.end()
        rest = text[end:]
        if rest.strip():
            stripped = rest.lstrip()
            if len(stripped) == len(rest):  # "3.14", "e.g.word": no gap
                continue
            if not stripped[0].isalnum():
                continue
        if m.group() == "." and _is_abbreviation(text[: m.start()], abbreviations):
            continue
        breaks.append(end)

    spans: list[tuple[int, int]] = []
    prev = 0
    for b in breaks + [len(text)]:
        if b <= prev:
            continue
        chunk = text[prev:b]
        lead = len(chunk) - len(chunk.lstrip())
        trail = len(chunk) - len(chunk.rstrip())
        start, end = prev + lead, b - trail
        if end > start:
            spans.append((start, end))
        prev = b
    return spans


def segment_sentences(
    text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[Sentence]:
    """Split ``text`` into sentences with byte spans into ``text``.

    Empty input yields an empty list.
    """
    if not text:
        return []
    offsets = _byte_offsets(text)
    sentences = []
    for i, (start, end) in enumerate(_segment_char_spans(text, abbreviations)):
        sentences.append(
            Sentence(
                index=i,
                text=text[start:end],
                span=SourceSpan(offsets[start], offsets[end]),
            )
        )
    return sentences


_MD_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*\S)\s*$")
_LATEX_HEADING_RE = re.compile(
    r"^\\(section|subsection|subsubsection)\*?\{(.+?)\}\s*$"
)
_NUMBERED_HEADING_RE = re.compile(r"^(\d+(?:\.\d+)*)[.)]?\s+(\S.*?)\s*$")
_LATEX_LEVEL = {"section": 1, "subsection": 2, "subsubsection": 3}


def _plain_heading(line: str, prev_blank: bool, next_blank: bool):
    """Plain-format heading: ALL-CAPS or numbered line on its own paragraph."""
    if not (prev_blank and next_blank):
        return None
    stripped = line.strip()
    if not stripped:
        return None
    m = _NUMBERED_HEADING_RE.match(stripped)
    if m:
        depth = m.group(1).count(".") + 1
        return min(depth, 3), m.group(2)
    has_alpha = any(c.isalpha() for c in stripped)
    if has_alpha and stripped == stripped.upper() and len(stripped) <= 100:
        return 1, stripped
    return None


def _find_headings(text: str, source_format: str):
    """Yield (line_start, line_end, level, heading_text) character ranges."""
    lines = text.split("\n")
    headings = []
    pos = 0
    for i, line in enumerate(lines):
        line_end = pos + len(line)
        if source_format == "markdown":
            m = _MD_HEADING_RE.match(line)
            if m:
                headings.append((pos, line_end, min(len(m.group(1)), 3), m.group(2)))
        elif source_format == "latex-min":
            m = _LATEX_HEADING_RE.match(line.strip())
            if m:
                headings.append((pos, line_end, _LATEX_LEVEL[m.group(1)], m.group(2)))
        else:
            prev_blank = i == 0 or not lines[i - 1].strip()
            next_blank = i == len(lines) - 1 or not lines[i + 1].strip()
            found = _plain_heading(line, prev_blank, next_blank)
            if found:
                headings.append((pos, line_end, found[0], found[1]))
        pos = line_end + 1  # skip the newline
    return headings


def _paragraph_blocks(text: str, start: int, end: int):
    """Blank-line-separated blocks inside text[start:end] as char ranges."""
    blocks = []
    block_start = None
    pos = start
    for line in text[start:end].split("\n"):
        line_end = pos + len(line)
        if line.strip():
            if block_start is None:
                block_start = pos
            block_end = line_end
        elif block_start is not None:
            blocks.append((block_start, block_end))
            block_start = None
        pos = line_end + 1
    if block_start is not None:
        blocks.append((block_start, block_end))
    return blocks


def parse_document(
    text: str,
    source_format: str = "markdown",
    *,
    title: str | None = None,
    authors: list[str] | None = None,
    wrap_untitled: bool = False,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> Document:
    """Parse ``text`` into a :class:`Document`.

    The document title defaults to the first heading.  Inputs without any
    recognizable heading raise :class:`NoSectionsFoundError` unless
    ``wrap_untitled`` is set, in which case the whole text becomes one
    section.  Parsing is pure: identical input and format give an
    identical document.
    """
    if source_format not in SUPPORTED_FORMATS:
        raise ValueError(
            f"unknown format {source_format!r}; expected one of {SUPPORTED_FORMATS}"
        )
    if not text or not text.strip():
        raise EmptyInputError("document text is empty")

    offsets = _byte_offsets(text)
    headings = _find_headings(text, source_format)

    # (level, heading, content_start, content_end) in char offsets
    raw_sections: list[tuple[int, str, int, int]] = []
    if not headings:
        if not wrap_untitled:
            raise NoSectionsFoundError(
                "no headings recognized; pass wrap_untitled=True to treat the "
                "whole text as a single section"
            )
        raw_sections.append((1, title or "Document", 0, len(text)))
    else:
        first_start = headings[0][0]
        if text[:first_start].strip():
            raw_sections.append((1, "", 0, first_start))
        for j, (h_start, h_end, level, heading) in enumerate(headings):
            content_start = min(h_end + 1, len(text))
            content_end = headings[j + 1][0] if j + 1 < len(headings) else len(text)
            raw_sections.append((level, heading, content_start, content_end))

    sections = []
    for idx, (level, heading, c_start, c_end) in enumerate(raw_sections):
        paragraphs = []
        sentences: list[Sentence] = []
        for b_start, b_end in _paragraph_blocks(text, c_start, c_end):
            block = text[b_start:b_end]
            paragraphs.append(block.strip())
            for s, e in _segment_char_spans(block, abbreviations):
                sentences.append(
                    Sentence(
                        index=len(sentences),
                        text=block[s:e],
                        span=SourceSpan(offsets[b_start + s], offsets[b_start + e]),
                    )
                )
        sections.append(
            Section(
                index=idx,
                heading=heading,
                level=level,
                paragraphs=paragraphs,
                sentences=sentences,
            )
        )

    if title is None:
        title = next((s.heading for s in sections if s.heading), "Untitled")
    return Document(
        title=title,
        authors=list(authors or []),
        sections=sections,
        source_format=source_format,
    )


_SLUG_STRIP_RE = re.compile(r"[^a-z0-9]+")


def slugify(text: str) -> str:
    """Lowercase, non-alphanumeric runs collapsed to single dashes."""
    return _SLUG_STRIP_RE.sub("-", text.lower()).strip("-")


def section_anchor(doc: Document, index: int) -> str:
    """Deterministic anchor "sec-<index>-<slug>" for hyperlink targets."""
    if not 0 <= index < len(doc.sections):
        raise IndexError(f"section index {index} out of range")
    slug = slugify(doc.sections[index].heading)
    return f"sec-{index}-{slug}" if slug else f"sec-{index}"


def decode_utf8(data: bytes) -> str:
    """Decode input bytes, reporting the offending byte offset on failure."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UnicodeDecodeError(
            exc.encoding,
            exc.object,
            exc.start,
            exc.end,
            f"invalid UTF-8 at byte offset {exc.start}",
        ) from None
