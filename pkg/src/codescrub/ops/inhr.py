"""Copy non-overridden superclass methods into a subclass, then shuffle.

Superclasses resolve by class name against the supplied units and are
searched breadth-first, closest ancestor first, so an override anywhere
on the path shadows the methods above it. Dunder-init and abstract
methods never transfer. The copied set is capped by a seeded sample and
a method shuffle always follows the append.
"""

from __future__ import annotations

import random
import textwrap
from dataclasses import replace

from .. import pytree
from ..errors import PreconditionError
from ..textspan import Edit, apply_edits
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome, RefactorConfig
from .shuf import _class_method_nodes, shuffle_methods


def _first_classdef(tree: pytree.PyTree):
    classes = tree.find_all("classdef")
    if not classes:
        raise PreconditionError("no class definition in unit")
    return classes[0]


def _base_names(classdef) -> list[str]:
    """Base-class names as written, dotted paths reduced to the last part."""
    if classdef.children[2].value != "(":
        return []
    args = classdef.children[3]
    if args.type == "operator" and args.value == ")":
        return []
    items = args.children[::2] if args.type == "arglist" else [args]
    names = []
    for item in items:
        if item.type == "argument":  # metaclass=..., *bases, **kwargs
            continue
        names.append(pytree.code_of(item).strip().rsplit(".", 1)[-1])
    return names


def _method_name(stmt) -> str:
    node = stmt
    if node.type == "decorated":
        node = node.children[-1]
    if node.type == "async_funcdef":
        node = node.children[-1]
    return node.children[1].value


def _is_abstract(stmt) -> bool:
    if stmt.type != "decorated":
        return False
    decorators = stmt.children[0]
    nodes = decorators.children if decorators.type == "decorators" else [decorators]
    for deco in nodes:
        name = pytree.code_of(deco.children[1]).strip()
        if name.rsplit(".", 1)[-1].startswith("abstractmethod"):
            return True
    return False


def _method_source(tree: pytree.PyTree, stmt) -> str:
    """Full dedented lines of one method, decorators included."""
    start = tree.offset((stmt.start_pos[0], 0))
    end = tree.offset(stmt.end_pos)
    text = textwrap.dedent(tree.text[start:end])
    if not text.endswith("\n"):
        text += "\n"
    return text


def _inheritable(superclass_units: list[CodeUnit]) -> dict[str, tuple]:
    """Class name -> (tree, classdef) for every resolvable superclass unit."""
    table = {}
    for unit in superclass_units:
        try:
            tree = pytree.parse(unit.text)
        except Exception:
            continue
        for classdef in tree.find_all("classdef"):
            table.setdefault(classdef.children[1].value, (tree, classdef))
    return table


def apply_inhr(
    unit: CodeUnit,
    superclass_units: list[CodeUnit],
    seed: int,
    config: RefactorConfig,
) -> OperatorOutcome:
    tree = pytree.parse(unit.text)
    classdef = _first_classdef(tree)
    if classdef.children[-1].type != "suite":
        raise PreconditionError("inline class body cannot take appended methods")
    table = _inheritable(superclass_units)

    queue = [n for n in _base_names(classdef) if n in table]
    if not queue:
        raise PreconditionError("no superclass resolvable among supplied units")

    # Closest ancestors first; a name seen earlier shadows later ones.
    seen_names = {_method_name(m) for m in _class_method_nodes(classdef)}
    visited_classes = set()
    candidates = []  # (source text, method name)
    notes = []
    while queue:
        name = queue.pop(0)
        if name in visited_classes:
            continue
        visited_classes.add(name)
        sup_tree, sup_classdef = table[name]
        for stmt in _class_method_nodes(sup_classdef):
            method = _method_name(stmt)
            if method in seen_names:
                continue
            seen_names.add(method)
            if method == "__init__" or _is_abstract(stmt):
                notes.append(f"skipped {name}.{method}")
                continue
            candidates.append((_method_source(sup_tree, stmt), f"{name}.{method}"))
        queue.extend(n for n in _base_names(sup_classdef) if n in table)

    if not candidates:
        return OperatorOutcome(
            OperatorId.INHR, False, 0, unit.text, notes + ["no inheritable methods"]
        )

    cap = config.max_inherited_methods
    if len(candidates) > cap:
        rng = random.Random(seed)
        picked = sorted(rng.sample(range(len(candidates)), cap))
        candidates = [candidates[i] for i in picked]

    own_methods = _class_method_nodes(classdef)
    if own_methods:
        body_indent = pytree.node_indent(tree, own_methods[0])
    else:
        body_indent = pytree.node_indent(tree, classdef) + "    "
    blocks = []
    for source, origin in candidates:
        indented = "".join(
            body_indent + line if line.strip() else line
            for line in source.splitlines(keepends=True)
        )
        blocks.append(indented)
        notes.append(f"inherited {origin}")

    suite_end = tree.node_span(classdef.children[-1])[1]
    joined = "".join(blocks)
    if not tree.text[:suite_end].endswith("\n"):
        joined = "\n" + joined
    text = apply_edits(unit.text, [Edit(suite_end, suite_end, joined)])

    try:
        text, _moved = shuffle_methods(text, seed)
    except PreconditionError:
        notes.append("shuffle skipped: fewer than two methods")
    sites = len(candidates)
    return OperatorOutcome(OperatorId.INHR, True, sites, text, notes)
