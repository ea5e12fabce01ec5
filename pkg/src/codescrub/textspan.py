"""Offset arithmetic and span edits over source text.

Offsets throughout the toolkit are Unicode codepoint offsets into the
source string (not UTF-8 byte offsets), so Python slicing applies directly.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass


def line_starts(text: str) -> list[int]:
    """Offsets at which each line begins (line 1 starts at offset 0)."""
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def pos_to_offset(starts: list[int], pos: tuple[int, int]) -> int:
    """Convert a 1-based (line, column) position to an absolute offset."""
    line, col = pos
    return starts[line - 1] + col


def offset_to_pos(starts: list[int], offset: int) -> tuple[int, int]:
    line = bisect_right(starts, offset)
    return line, offset - starts[line - 1]


@dataclass(frozen=True)
class Edit:
    """Replace text[start:end] with `replacement`."""

    start: int
    end: int
    replacement: str


def apply_edits(text: str, edits: list[Edit]) -> str:
    """Apply non-overlapping edits in one pass.

    Edits are sorted by start; overlap raises ValueError because it always
    indicates a transformation bug upstream.
    """
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.start < prev.end:
            raise ValueError(f"overlapping edits at {prev.end}..{cur.start}")
    out = []
    cursor = 0
    for e in ordered:
        out.append(text[cursor:e.start])
        out.append(e.replacement)
        cursor = e.end
    out.append(text[cursor:])
    return "".join(out)


def indentation_of(text: str, offset: int) -> str:
    """Leading whitespace of the line containing `offset`."""
    line_start = text.rfind("\n", 0, offset) + 1
    i = line_start
    while i < len(text) and text[i] in " \t":
        i += 1
    return text[line_start:i]
