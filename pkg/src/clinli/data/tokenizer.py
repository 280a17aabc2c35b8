"""Deterministic whitespace/punctuation tokenizer.

Lowercases, detaches punctuation into separate tokens, keeps numbers with
internal ./-/ / intact (13.3, 3-23, 1/2), keeps a configurable list of
dotted abbreviations whole, and detaches English contraction suffixes
(n't, 's, ...) as their own tokens. Runs of the same punctuation mark stay
together ("**" is one token). Idempotent when re-applied to its own
space-joined output.
"""

from __future__ import annotations

import re

DEFAULT_ABBREVIATIONS = ("dr.", "mr.", "mrs.", "ms.", "prof.", "vs.")

_CONTRACTION_RE = re.compile(r"(?<=[a-z])(n't|'s|'m|'re|'ve|'ll|'d)\b")


def _token_pattern(abbreviations) -> re.Pattern:
    abbrev = "|".join(re.escape(a) for a in sorted(abbreviations, key=len, reverse=True))
    parts = []
    if abbrev:
        parts.append(rf"(?:(?<![a-z0-9])(?:{abbrev})(?![a-z0-9]))")
    parts.extend(
        [
            r"n't|'s|'m|'re|'ve|'ll|'d",  # detached contraction suffixes
            r"\d+(?:[.\-/:]\d+)*(?![a-z0-9])",  # numbers with internal punctuation
            r"[a-z0-9]+",  # words
            r"(?P<p>[^\w\s])(?P=p)*",  # punctuation runs of one mark
        ]
    )
    return re.compile("|".join(parts))


_DEFAULT_PATTERN = _token_pattern(DEFAULT_ABBREVIATIONS)


def tokenize(text: str, abbreviations=None) -> list[str]:
    """Split ``text`` into lowercase tokens. Empty text gives an empty list."""
    if not text:
        return []
    pattern = _DEFAULT_PATTERN if abbreviations is None else _token_pattern(abbreviations)
    lowered = _CONTRACTION_RE.sub(r" \1", text.lower())
    return [m.group(0) for m in pattern.finditer(lowered)]
