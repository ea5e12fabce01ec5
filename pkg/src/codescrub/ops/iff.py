"""If-condition flip: negate the condition and swap the branches.

`if c: A else: B` becomes `if not (c): B else: A`. Without an else branch
the body moves into a new else and the then-branch becomes `pass`. elif
chains are left alone: flipping them reorders condition evaluation.
"""

from __future__ import annotations

from .. import pytree
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome
from .rewrite import rewrite


def apply_iff(unit: CodeUnit) -> OperatorOutcome:
    tree = pytree.parse(unit.text, strict=True)
    sites = 0
    notes: list[str] = []

    def transform(node, rendered):
        nonlocal sites
        if node.type != "if_stmt":
            return None
        if any(c.type == "keyword" and c.value == "elif" for c in node.children):
            notes.append(f"elif chain at line {node.start_pos[0]} skipped")
            return None
        sites += 1
        kids = node.children
        negated = " not (" + rendered[1].strip() + ")"
        if len(kids) == 7:  # if cond : suite else : suite
            return (
                rendered[0]
                + negated
                + rendered[2]
                + rendered[6]  # else-branch body takes the then slot
                + rendered[4]
                + rendered[5]
                + rendered[3]  # then-branch body takes the else slot
            )
        # no else: then-branch becomes pass, body moves under a new else
        if_indent = pytree.node_indent(tree, node)
        suite = kids[3]
        body = rendered[3]
        if suite.type == "suite":
            first_stmt = next(
                (c for c in suite.children if c.type not in ("newline",)), None
            )
            body_indent = (
                pytree.node_indent(tree, first_stmt) if first_stmt else if_indent + "    "
            )
            new_then = "\n" + body_indent + "pass"
        else:
            new_then = " pass"
            body = " " + body.strip() + "\n"
        if not body.startswith(("\n", " ")):
            body = " " + body
        return (
            rendered[0]
            + negated
            + rendered[2]
            + new_then
            + "\n"
            + if_indent
            + "else:"
            + body
        )

    new_text = rewrite(tree.root, transform)
    if sites == 0:
        return OperatorOutcome.unchanged(OperatorId.IFF, unit.text, notes[0] if notes else None)
    return OperatorOutcome(OperatorId.IFF, True, sites, new_text, notes)
