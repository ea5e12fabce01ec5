"""Character-level corpus overlap measurement.

A text's overlap ratio is the fraction of its non-whitespace characters
covered by at least one fixed-width normalized window found in the corpus
sketch. Matched character runs are projected back to original offsets.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .sketch.membership import NgramSketch
from .sketch.normalize import normalize


@dataclass
class OverlapReport:
    total_chars: int
    overlapped_chars: int
    ratio: float
    matched_ranges: list[tuple[int, int]] = field(default_factory=list)
    note: str = ""


def overlap(text: str, sketch: NgramSketch) -> OverlapReport:
    nt = normalize(text)
    total = len(nt.chars)
    w = sketch.gram_width
    if total == 0:
        return OverlapReport(0, 0, 0.0, note="empty after normalization")
    if total < w:
        return OverlapReport(total, 0, 0.0, note=f"shorter than gram width {w}")
    # Window hits marked via an endpoint-difference array: O(n) regardless of
    # how many windows cover one character.
    cover = [0] * (total + 1)
    for i in range(total - w + 1):
        if sketch.contains(nt.chars[i : i + w]):
            cover[i] += 1
            cover[i + w] -= 1
    marked = 0
    ranges: list[tuple[int, int]] = []
    depth = 0
    run_start = None
    for i in range(total + 1):
        depth += cover[i]
        inside = depth > 0 and i < total
        if inside and run_start is None:
            run_start = i
        elif not inside and run_start is not None:
            marked += i - run_start
            ranges.append(nt.to_original_range(run_start, i))
            run_start = None
    return OverlapReport(total, marked, marked / total, matched_ranges=ranges)


def overlap_delta(original: str, refactored: str, sketch: NgramSketch) -> float:
    """Original ratio minus refactored ratio; positive means overlap dropped."""
    return overlap(original, sketch).ratio - overlap(refactored, sketch).ratio


def batch_overlap(
    texts: list[tuple[str, str]], sketch: NgramSketch
) -> tuple[dict[str, OverlapReport], float]:
    """Score (unit_id, text) pairs; returns per-unit reports and the median ratio."""
    reports = {unit_id: overlap(text, sketch) for unit_id, text in texts}
    med = statistics.median(r.ratio for r in reports.values()) if reports else 0.0
    return reports, med
