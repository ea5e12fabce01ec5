"""Variadic parameter append: give every signature *args/**kwargs tails.

Appended parameters are optional, so existing call sites keep working. A
bare keyword-only `*` marker upgrades to `*args` in place.
"""

from __future__ import annotations

from .. import pytree
from ..units import CodeUnit
from ..textspan import Edit, apply_edits
from .base import OperatorId, OperatorOutcome


def _scan_params(parameters) -> dict:
    """Classify the parameter list of one funcdef."""
    info = {"star": None, "bare_star": None, "double": None, "last_code": None}
    for child in parameters.children:
        if child.type == "operator" and child.value == "*":
            info["bare_star"] = child
        elif child.type == "param":
            first = child.children[0]
            if first.type == "operator" and first.value == "*":
                info["star"] = child
            elif first.type == "operator" and first.value == "**":
                info["double"] = child
    code = [c for c in parameters.children if not (c.type == "operator" and c.value in "()")]
    if code:
        info["last_code"] = code[-1]
    return info


def apply_param(unit: CodeUnit) -> OperatorOutcome:
    tree = pytree.parse(unit.text, strict=True)
    funcdefs = tree.find_all("funcdef")
    if not funcdefs:
        return OperatorOutcome.unchanged(OperatorId.PARAM, unit.text, "no function definitions")
    taken = pytree.all_name_tokens(tree)
    star_name = pytree.available_name("args", taken)
    double_name = pytree.available_name("kwargs", taken)
    edits = []
    sites = 0
    notes: list[str] = []
    for funcdef in funcdefs:
        parameters = funcdef.children[2]
        info = _scan_params(parameters)
        changed = False
        close_paren = parameters.children[-1]
        close_start, _ = tree.leaf_span(close_paren)
        tail_pieces = []
        if info["star"] is None:
            if info["bare_star"] is not None:
                # keyword-only marker becomes a real variadic parameter
                s, e = tree.leaf_span(info["bare_star"])
                edits.append(Edit(s, e, f"*{star_name}"))
            elif info["double"] is not None:
                s, _ = tree.node_span(info["double"], include_prefix=False)
                edits.append(Edit(s, s, f"*{star_name}, "))
            else:
                tail_pieces.append(f"*{star_name}")
            changed = True
        else:
            notes.append(f"{funcdef.children[1].value} already takes *{_param_name(info['star'])}")
        if info["double"] is None:
            tail_pieces.append(f"**{double_name}")
            changed = True
        else:
            notes.append(f"{funcdef.children[1].value} already takes **{_param_name(info['double'])}")
        if tail_pieces:
            insert = _tail_insert(tree, parameters, ", ".join(tail_pieces))
            edits.append(Edit(close_start, close_start, insert))
        if changed:
            sites += 1
    if sites == 0:
        return OperatorOutcome.unchanged(OperatorId.PARAM, unit.text, notes[0] if notes else None)
    new_text = apply_edits(unit.text, edits)
    renames = []
    if star_name != "args":
        renames.append(f"fresh name {star_name} avoids a binding collision")
    if double_name != "kwargs":
        renames.append(f"fresh name {double_name} avoids a binding collision")
    return OperatorOutcome(OperatorId.PARAM, True, sites, new_text, notes + renames)


def _param_name(param) -> str:
    for child in param.children:
        if child.type == "name":
            return child.value
    return "?"


def _tail_insert(tree, parameters, piece: str) -> str:
    """Text to add immediately before the closing paren."""
    before = parameters.children[-1].get_previous_leaf()
    if before is parameters.children[0]:  # empty parameter list
        return piece
    if before.type == "operator" and before.value == ",":
        return f" {piece}"
    return f", {piece}"