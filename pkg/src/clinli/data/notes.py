"""Clinical note segmentation: section headers and sentence boundaries.

Section headers in this genre are short runs of capitalized words ending
in a colon at the start of a line ("PAST MEDICAL HISTORY:", "Chief
Complaint:"). An editable alias table maps surface headers to canonical
section names; anything before the first header lands in an UNNAMED
section.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources as importlib_resources

UNNAMED = "UNNAMED"

_HEADER_RE = re.compile(r"^[ \t]*([A-Z][A-Za-z'/\-]*(?:[ \t]+[A-Z0-9][A-Za-z0-9'/\-]*){0,5}):", re.MULTILINE)


def _load_default_aliases() -> dict[str, str]:
    ref = importlib_resources.files("clinli.resources").joinpath("section_aliases.json")
    return json.loads(ref.read_text(encoding="utf-8"))


_DEFAULT_ALIASES = _load_default_aliases()


def canonical_section_name(header: str, aliases: dict[str, str] | None = None) -> str:
    aliases = _DEFAULT_ALIASES if aliases is None else aliases
    key = " ".join(header.lower().split())
    return aliases.get(key, key.replace(" ", "_"))


@dataclass
class NoteSection:
    header: str  # canonical name or UNNAMED
    body: str  # stripped section text
    note_id: str
    raw_body: str = ""  # exact slice; concatenating raw bodies rebuilds the note minus headers


def segment_note_sections(text: str, note_id: str = "", aliases: dict[str, str] | None = None) -> list[NoteSection]:
    """Split a note into header-delimited sections.

    The header match consumes only the "Name:" prefix; same-line text after
    the colon stays in the body, so concatenating raw bodies in order
    reconstructs the note minus the header prefixes.
    """

    def section(header, raw):
        return NoteSection(header=header, body=raw.strip(), note_id=note_id, raw_body=raw)

    matches = list(_HEADER_RE.finditer(text))
    sections = []
    if not matches:
        return [section(UNNAMED, text)]
    if matches[0].start() > 0:
        sections.append(section(UNNAMED, text[: matches[0].start()]))
    for i, match in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        sections.append(section(canonical_section_name(match.group(1), aliases), text[match.end() : end]))
    return sections


_BOUNDARY_RE = re.compile(r"[.?!]+(?=\s+[A-Z0-9])")
_BRACKET_SPAN_RE = re.compile(r"\[\*\*.*?\*\*\]", re.DOTALL)
_WORD_BEFORE_RE = re.compile(r"(\S+)$")

DEFAULT_SENTENCE_ABBREVIATIONS = ("dr.", "mr.", "mrs.", "ms.", "prof.", "vs.", "e.g.", "i.e.")


def split_sentences(text: str, abbreviations=DEFAULT_SENTENCE_ABBREVIATIONS) -> list[str]:
    """Rule-based sentence splitting.

    Splits after [.?!] runs followed by whitespace and an uppercase letter
    or digit. Never splits inside de-identification spans [** ... **],
    after listed abbreviations, or after single-letter initials; decimals
    survive because a digit never follows ``". "``-style boundaries inside
    a number.
    """
    protected = []
    for match in _BRACKET_SPAN_RE.finditer(text):
        protected.append((match.start(), match.end()))

    def inside_protected(pos: int) -> bool:
        return any(start <= pos < end for start, end in protected)

    boundaries = []
    for match in _BOUNDARY_RE.finditer(text):
        if inside_protected(match.start()):
            continue
        before = _WORD_BEFORE_RE.search(text[: match.end()])
        if before:
            word = before.group(1).lower()
            if word in abbreviations:
                continue
            # single-letter initial like "J."
            if len(word) == 2 and word[0].isalpha() and word[1] == ".":
                continue
        boundaries.append(match.end())

    sentences = []
    start = 0
    for boundary in boundaries:
        chunk = text[start:boundary].strip()
        if chunk:
            sentences.append(chunk)
        start = boundary
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
