"""Whitespace normalization with position back-mapping."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NormalizedText:
    chars: str  # original text minus every whitespace character
    index_map: tuple[int, ...]  # normalized position -> original offset

    def __len__(self) -> int:
        return len(self.chars)

    def to_original_range(self, start: int, end: int) -> tuple[int, int]:
        """Project a half-open normalized range back onto original offsets."""
        if start >= end:
            return (0, 0)
        return (self.index_map[start], self.index_map[end - 1] + 1)


def normalize(text: str) -> NormalizedText:
    chars = []
    index_map = []
    for i, c in enumerate(text):
        if not c.isspace():
            chars.append(c)
            index_map.append(i)
    return NormalizedText("".join(chars), tuple(index_map))
