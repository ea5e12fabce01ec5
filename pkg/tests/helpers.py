"""Execution and overlap oracles shared across test modules."""

from __future__ import annotations

import copy

from codescrub.sketch import normalize


def brute_force_overlap(text: str, corpus_texts: list[str], width: int) -> tuple[int, int]:
    """Character-marking oracle: mark every char under any corpus window."""
    grams = set()
    for doc in corpus_texts:
        chars = normalize(doc).chars
        for i in range(len(chars) - width + 1):
            grams.add(chars[i : i + width])
    chars = normalize(text).chars
    marked = [False] * len(chars)
    for i in range(len(chars) - width + 1):
        if chars[i : i + width] in grams:
            for j in range(i, i + width):
                marked[j] = True
    return sum(marked), len(chars)


def run_function(source: str, name: str, cases) -> list:
    """Compile source, call `name` on every case, return the results.

    Each case is an argument tuple (bare values mean one argument). Arguments
    are deep-copied per call so mutating functions cannot leak state between
    the original and refactored runs.
    """
    namespace: dict = {}
    exec(compile(source, f"<fixture:{name}>", "exec"), namespace)
    func = namespace[name]
    results = []
    for case in cases:
        args = case if isinstance(case, tuple) else (case,)
        results.append(func(*copy.deepcopy(args)))
    return results


def assert_same_behavior(original: str, refactored: str, name: str, cases) -> None:
    expected = run_function(original, name, cases)
    actual = run_function(refactored, name, cases)
    assert actual == expected, (
        f"{name}: behavior diverged\n--- original results ---\n{expected}\n"
        f"--- refactored results ---\n{actual}\n--- refactored code ---\n{refactored}"
    )
