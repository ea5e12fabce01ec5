"""Seeded shuffle of method order inside a class body."""

from __future__ import annotations

import random

from .. import pytree
from ..errors import PreconditionError
from ..textspan import Edit, apply_edits
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome
from .comm import _permutation


def _class_method_nodes(classdef) -> list:
    """Direct method statements of the class suite (decorated forms included)."""
    suite = classdef.children[-1]
    if suite.type != "suite":
        return []
    methods = []
    for stmt in suite.children:
        node = stmt
        if node.type == "decorated":
            node = node.children[-1]
        if node.type == "async_funcdef":
            node = node.children[-1]
        if node.type == "funcdef":
            methods.append(stmt)
    return methods


def shuffle_methods(text: str, seed: int) -> tuple[str, int]:
    """Permute methods of the first class in the text; returns (text, moved)."""
    tree = pytree.parse(text, strict=True)
    classes = tree.find_all("classdef")
    if not classes:
        raise PreconditionError("no class definition in unit")
    methods = _class_method_nodes(classes[0])
    if len(methods) < 2:
        raise PreconditionError(f"class has {len(methods)} methods; need at least 2")
    rng = random.Random(seed)
    perm = _permutation(rng, len(methods))
    if perm == list(range(len(methods))):
        return text, 0
    edits = []
    moved = 0
    for slot, src in enumerate(perm):
        if slot == src:
            continue
        moved += 1
        start, end = tree.node_span(methods[slot], include_prefix=False)
        edits.append(Edit(start, end, pytree.code_of(methods[src])))
    return apply_edits(text, edits), moved


def apply_shuf(unit: CodeUnit, seed: int) -> OperatorOutcome:
    new_text, moved = shuffle_methods(unit.text, seed)
    if moved == 0:
        return OperatorOutcome.unchanged(
            OperatorId.SHUF, unit.text, "identity permutation drawn twice"
        )
    return OperatorOutcome(OperatorId.SHUF, True, moved, new_text, [])
