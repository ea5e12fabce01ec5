"""Rename local identifiers to synonym-derived names.

Candidates are the unit's renameable bindings ranked by occurrence count
(ties broken by the seeded RNG). For each, synonyms are looked up per
word segment, final segment first and then earlier segments right to
left, falling back to the whole name; the first synonym that yields a
fresh, non-reserved identifier wins. Every occurrence is rewritten
through its recorded source range.
"""

from __future__ import annotations

import random

from ..identifiers import (
    RESERVED_NAMES,
    IdentifierBinding,
    IdentifierKind,
    ScopeModel,
    rename_in_text,
)
from ..pytree import all_name_tokens, parse
from ..units import CodeUnit
from . import words
from .base import OperatorId, OperatorOutcome, RefactorConfig
from .lexicon import SynonymLexicon


def _derive_name(
    name: str, lexicon: SynonymLexicon, taken: set[str]
) -> tuple[str | None, str]:
    """Pick a synonym-derived replacement, or (None, reason)."""
    spans = words.segment_spans(name)
    found_entry = False
    for start, end in reversed(spans):
        segment = name[start:end]
        synonyms = lexicon.synonyms(segment)
        found_entry = found_entry or bool(synonyms)
        for synonym in synonyms:
            candidate = name[:start] + words.match_case(segment, synonym) + name[end:]
            if _usable(candidate, name, taken):
                return candidate, ""
    lead, core, trail = words.strip_underscores(name)
    if core and len(spans) != 1:
        synonyms = lexicon.synonyms(core)
        found_entry = found_entry or bool(synonyms)
        for synonym in synonyms:
            candidate = lead + words.match_case(core, synonym) + trail
            if _usable(candidate, name, taken):
                return candidate, ""
    reason = "all synonyms collide" if found_entry else "no lexicon entry"
    return None, reason


def _usable(candidate: str, original: str, taken: set[str]) -> bool:
    return (
        candidate != original
        and candidate.isidentifier()
        and candidate not in RESERVED_NAMES
        and candidate not in taken
    )


def _is_dunder(name: str) -> bool:
    return name.startswith("__") and name.endswith("__") and len(name) > 4


def _candidates(model: ScopeModel, config: RefactorConfig) -> list[IdentifierBinding]:
    out = model.renameable()
    if config.rename_function_names:
        for b in model.all_bindings():
            if (
                b.kind is IdentifierKind.FUNCTION_NAME
                and b.scope_index is not None
                and not (b.is_reserved or b.is_import or b.is_external)
                and not _is_dunder(b.name)
            ):
                out.append(b)
    return out


def apply_renm(
    unit: CodeUnit, lexicon: SynonymLexicon, seed: int, config: RefactorConfig
) -> OperatorOutcome:
    tree = parse(unit.text)
    model = ScopeModel(tree)
    candidates = _candidates(model, config)
    if not candidates:
        return OperatorOutcome.unchanged(
            OperatorId.RENM, unit.text, "no renameable identifiers"
        )

    rng = random.Random(seed)
    rng.shuffle(candidates)
    # Stable sort keeps the shuffled order as the tie-break.
    candidates.sort(key=lambda b: -b.occurrence_count)

    taken = set(all_name_tokens(tree))
    renames: list[tuple[IdentifierBinding, str]] = []
    notes: list[str] = []
    for binding in candidates:
        if len(renames) == config.max_renames:
            break
        new_name, reason = _derive_name(binding.name, lexicon, taken)
        if new_name is None:
            notes.append(f"skipped {binding.name}: {reason}")
            continue
        renames.append((binding, new_name))
        taken.add(new_name)

    if not renames:
        return OperatorOutcome(OperatorId.RENM, False, 0, unit.text, notes)
    text = rename_in_text(unit.text, renames)
    notes.extend(f"renamed {b.name} -> {new}" for b, new in renames)
    return OperatorOutcome(OperatorId.RENM, True, len(renames), text, notes)
