"""Flip naming style of local identifiers between snake and camel case.

Every renameable identifier written as lower_snake_case becomes
lowerCamelCase and vice versa, across all of its occurrences.
Single-word names have no case boundary and are left alone; a flip
whose target name already exists in the unit is skipped with a note.
"""

from __future__ import annotations

from ..identifiers import RESERVED_NAMES, IdentifierBinding, ScopeModel, rename_in_text
from ..pytree import all_name_tokens, parse
from ..units import CodeUnit
from . import words
from .base import OperatorId, OperatorOutcome


def _flip(name: str) -> str | None:
    if words.is_lower_snake(name):
        return words.to_camel(name)
    if words.is_lower_camel(name):
        return words.to_snake(name)
    return None


def apply_styl(unit: CodeUnit) -> OperatorOutcome:
    tree = parse(unit.text)
    model = ScopeModel(tree)
    candidates = sorted(model.renameable(), key=lambda b: b.occurrences[0])

    taken = set(all_name_tokens(tree))
    renames: list[tuple[IdentifierBinding, str]] = []
    notes: list[str] = []
    for binding in candidates:
        new_name = _flip(binding.name)
        if new_name is None or new_name == binding.name:
            continue
        if new_name in RESERVED_NAMES or new_name in taken:
            notes.append(f"skipped {binding.name}: {new_name} already in use")
            continue
        renames.append((binding, new_name))
        taken.add(new_name)

    if not renames:
        return OperatorOutcome(OperatorId.STYL, False, 0, unit.text, notes)
    text = rename_in_text(unit.text, renames)
    return OperatorOutcome(OperatorId.STYL, True, len(renames), text, notes)
