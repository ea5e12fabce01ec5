"""Identifier word segmentation and naming-style conversion.

Names are split at underscores and at lower-to-upper case boundaries;
leading and trailing underscores are carried through conversions
unchanged. Acronym runs collapse to a single capitalized word on a
snake-to-camel round trip (parseHTTPResponse -> parse_http_response ->
parseHttpResponse).
"""

from __future__ import annotations

import re

# Words inside one underscore-free chunk: acronym runs before a
# capitalized word, capitalized words, and lowercase/digit runs.
_CAMEL_CHUNK_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z0-9])|[A-Z][a-z0-9]*|[a-z0-9]+")

_LOWER_SNAKE_RE = re.compile(r"[a-z][a-z0-9]*(?:_[a-z0-9]+)+\Z")
_LOWER_CAMEL_RE = re.compile(r"[a-z][a-z0-9]*(?:[A-Z][a-z0-9]*)+\Z")


def strip_underscores(name: str) -> tuple[str, str, str]:
    """Split a name into (leading underscores, core, trailing underscores)."""
    lead = len(name) - len(name.lstrip("_"))
    if lead == len(name):
        return name, "", ""
    trail = len(name) - len(name.rstrip("_"))
    return name[:lead], name[lead : len(name) - trail], name[len(name) - trail :]


def segment_spans(name: str) -> list[tuple[int, int]]:
    """Character spans of the word segments of ``name``."""
    lead, core, _ = strip_underscores(name)
    spans = []
    offset = len(lead)
    for chunk in core.split("_"):
        for m in _CAMEL_CHUNK_RE.finditer(chunk):
            spans.append((offset + m.start(), offset + m.end()))
        offset += len(chunk) + 1
    return spans


def split_identifier(name: str) -> list[str]:
    """Word segments of ``name`` in order."""
    return [name[s:e] for s, e in segment_spans(name)]


def is_lower_snake(name: str) -> bool:
    """True for multi-word lower_snake_case cores like ``current_row``."""
    _, core, _ = strip_underscores(name)
    return bool(_LOWER_SNAKE_RE.match(core))


def is_lower_camel(name: str) -> bool:
    """True for multi-word lowerCamelCase cores like ``currentRow``."""
    _, core, _ = strip_underscores(name)
    return bool(_LOWER_CAMEL_RE.match(core))


def to_camel(name: str) -> str:
    """Convert a snake-case name to lowerCamelCase."""
    lead, core, trail = strip_underscores(name)
    words = [w for w in core.split("_") if w]
    if not words:
        return name
    head = words[0].lower()
    tail = "".join(w[:1].upper() + w[1:].lower() for w in words[1:])
    return lead + head + tail + trail


def to_snake(name: str) -> str:
    """Convert a camel-case name to lower_snake_case."""
    lead, core, trail = strip_underscores(name)
    words = _CAMEL_CHUNK_RE.findall(core)
    if not words:
        return name
    return lead + "_".join(w.lower() for w in words) + trail


def match_case(pattern: str, word: str) -> str:
    """Restyle ``word`` to the case shape of ``pattern``.

    ALLCAPS patterns uppercase the word, Capitalized patterns title it,
    anything else lowers it.
    """
    if len(pattern) > 1 and pattern.isupper():
        return word.upper()
    if pattern[:1].isupper():
        return word[:1].upper() + word[1:].lower()
    return word.lower()
