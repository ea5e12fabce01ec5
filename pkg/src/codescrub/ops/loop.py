"""Loop exchange: for-loops become iterator-driven while-loops and back.

for x in xs:            _iterN = iter(xs)
    body          ->    while True:
                            try:
                                x = next(_iterN)
                            except StopIteration:
                                break
                            body

while cond:       ->    for _loopN in iter(lambda: bool(cond), False):
    body                    body

Both directions keep the body verbatim at its original indentation, which
is what lets nested loops transform independently. Loops with else clauses
are skipped: the exchange cannot express their exhaustion semantics.
"""

from __future__ import annotations

from .. import pytree
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome
from .rewrite import rewrite


def _contains_type(node, wanted: str) -> bool:
    if node.type == wanted:
        return True
    return any(_contains_type(c, wanted) for c in getattr(node, "children", []))


def _contains_await(node) -> bool:
    if node.type == "keyword" and node.value == "await":
        return True
    return any(_contains_await(c) for c in getattr(node, "children", []))


def _block_indents(tree, node, suite) -> tuple[str, str, str]:
    """(loop indent, body indent, one-deeper indent) honoring tabs."""
    outer = pytree.node_indent(tree, node)
    if suite.type == "suite":
        first = next((c for c in suite.children if c.type != "newline"), None)
        body = pytree.node_indent(tree, first) if first is not None else outer + "    "
    else:
        body = outer + "    "
    step = body[len(outer) :] or "    "
    return outer, body, body + step


def _body_block(rendered_suite: str, suite, body_indent: str) -> str:
    """Suite text as an indented block, converting inline suites."""
    if suite.type == "suite":
        return rendered_suite
    text = "\n" + body_indent + rendered_suite.strip()
    return text + "\n"


def apply_loop(unit: CodeUnit) -> OperatorOutcome:
    tree = pytree.parse(unit.text, strict=True)
    taken = set(pytree.all_name_tokens(tree))
    sites = 0
    notes: list[str] = []

    def skip(node, reason: str):
        notes.append(f"{node.type} at line {node.start_pos[0]} skipped: {reason}")

    def transform(node, rendered):
        nonlocal sites
        if node.type == "for_stmt":
            return for_to_while(node, rendered)
        if node.type == "while_stmt":
            return while_to_for(node, rendered)
        return None

    def for_to_while(node, rendered):
        nonlocal sites
        if len(node.children) > 6:
            skip(node, "else clause")
            return None
        if node.parent is not None and node.parent.type == "async_stmt":
            skip(node, "async iteration")
            return None
        prefix = node.children[0].prefix
        outer, body_ind, inner = _block_indents(tree, node, node.children[5])
        target = rendered[1].strip()
        iterable = rendered[3].strip()
        if node.children[3].type in ("testlist", "testlist_star_expr", "exprlist"):
            iterable = f"({iterable})"
        it = pytree.fresh_name("_iter", taken)
        taken.add(it)
        body = _body_block(rendered[5], node.children[5], body_ind)
        sites += 1
        return (
            f"{prefix}{it} = iter({iterable})\n"
            f"{outer}while True:\n"
            f"{body_ind}try:\n"
            f"{inner}{target} = next({it})\n"
            f"{body_ind}except StopIteration:\n"
            f"{inner}break"
            f"{body}"
        )

    def while_to_for(node, rendered):
        nonlocal sites
        if len(node.children) > 4:
            skip(node, "else clause")
            return None
        cond = node.children[1]
        if _contains_type(cond, "namedexpr_test"):
            skip(node, "assignment expression in condition")
            return None
        if _contains_type(cond, "yield_expr"):
            skip(node, "yield in condition")
            return None
        if _contains_await(cond):
            skip(node, "await in condition")
            return None
        prefix = node.children[0].prefix
        _, body_ind, _ = _block_indents(tree, node, node.children[3])
        var = pytree.fresh_name("_loop", taken)
        taken.add(var)
        body = _body_block(rendered[3], node.children[3], body_ind)
        sites += 1
        return (
            f"{prefix}for {var} in iter(lambda: bool({rendered[1].strip()}), False):"
            f"{body}"
        )

    new_text = rewrite(tree.root, transform)
    if sites == 0:
        return OperatorOutcome.unchanged(OperatorId.LOOP, unit.text, notes[0] if notes else None)
    return OperatorOutcome(OperatorId.LOOP, True, sites, new_text, notes)
