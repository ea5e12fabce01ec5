"""Commutative shuffle of boolean operand groups.

Operands chained under one `and`/`or` are permuted together; groups under
different operators never mix. Groups containing assignment expressions
are left alone (reordering would move the binding point), as are groups
where any operand relies on an earlier one as a guard: short-circuiting
means `i < len(xs) and xs[i] > 0` evaluates the subscript only when the
bound holds, so only operands that cannot raise may change position.
"""

from __future__ import annotations

import random

from .. import pytree
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome
from .rewrite import rewrite


def _has_walrus(node) -> bool:
    if node.type == "namedexpr_test":
        return True
    for child in getattr(node, "children", []):
        if _has_walrus(child):
            return True
    return False


# Operator leaves whose evaluation cannot raise on bound operands.
# Division and modulo (ZeroDivisionError) stay out, as does `in`
# (TypeError on None), so the classic guard patterns keep their order.
_SAFE_OPERATOR_LEAVES = frozenset({"<", ">", "<=", ">=", "==", "!=", "+", "-", "*"})
_SAFE_KEYWORDS = frozenset({"None", "True", "False", "not", "is", "and", "or"})


def _exception_safe(node) -> bool:
    """Whether eager evaluation is crash-free for any bound names.

    Subscripts, calls, and attribute access are exactly what guards
    protect, so any operand containing them pins the whole group.
    """
    t = node.type
    if t in ("name", "number", "string", "strings"):
        return True
    if t == "keyword":
        return node.value in _SAFE_KEYWORDS
    if t == "operator":
        return node.value in _SAFE_OPERATOR_LEAVES
    if t == "comp_op":
        return all(leaf.value != "in" for leaf in node.children)
    if t in ("not_test", "and_test", "or_test", "comparison", "arith_expr", "term", "factor"):
        return all(_exception_safe(c) for c in node.children)
    if t == "atom" and node.children[0].value == "(" and len(node.children) == 3:
        return _exception_safe(node.children[1])
    return False


def _permutation(rng: random.Random, n: int) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    if perm == list(range(n)) and n > 1:
        rng.shuffle(perm)  # one resample when the draw is the identity
    return perm


def apply_comm(unit: CodeUnit, seed: int) -> OperatorOutcome:
    tree = pytree.parse(unit.text, strict=True)
    rng = random.Random(seed)
    sites = 0
    notes: list[str] = []

    def transform(node, rendered):
        nonlocal sites
        if node.type not in ("or_test", "and_test"):
            return None
        operands = node.children[::2]
        if any(_has_walrus(op) for op in operands):
            notes.append(
                f"group at line {node.start_pos[0]} holds an assignment expression"
            )
            return None
        if not all(_exception_safe(op) for op in operands):
            notes.append(
                f"group at line {node.start_pos[0]}: an operand needs its guard"
            )
            return None
        perm = _permutation(rng, len(operands))
        if perm == list(range(len(operands))):
            return None
        sites += 1
        # Prefixes (whitespace/comments) stay with their slot; code moves.
        prefixes = [c.get_first_leaf().prefix for c in operands]
        contents = [rendered[2 * i][len(prefixes[i]) :] for i in range(len(operands))]
        pieces = []
        for slot in range(len(node.children)):
            if slot % 2 == 0:
                pieces.append(prefixes[slot // 2] + contents[perm[slot // 2]])
            else:
                pieces.append(rendered[slot])
        return "".join(pieces)

    new_text = rewrite(tree.root, transform)
    if sites == 0:
        return OperatorOutcome.unchanged(OperatorId.COMM, unit.text, notes[0] if notes else None)
    return OperatorOutcome(OperatorId.COMM, True, sites, new_text, notes)
