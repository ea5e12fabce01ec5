"""Style normalization: quote marks, precedence parentheses, spacing.

Three passes, each over a fresh parse of the previous result:

1. String literals are rewritten to single-quote delimiters with escapes
   adjusted, preserving the literal's value byte for byte. Triple-quoted
   strings stay as they are; raw strings and f-strings convert only when
   the swap cannot change their value.
2. A binary sub-expression whose operator binds differently from its
   parent expression is wrapped in parentheses, making precedence
   explicit.
3. Horizontal whitespace around binary operators (including assignment
   and `->`) is regularized to one space. Gaps holding newlines,
   comments, or line continuations are left alone.

The composition is a fixpoint: normalizing twice equals normalizing
once, so an already-normalized unit reports applied=False.
"""

from __future__ import annotations

from ..pytree import parse
from ..textspan import Edit, apply_edits, line_starts, pos_to_offset
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome
from .rewrite import rewrite

# Expression nodes of the form operand (op operand)+ with one precedence
# level each. factor (unary) and atom_expr (trailers) stay out.
_BINARY_NODES = frozenset(
    {
        "or_test",
        "and_test",
        "comparison",
        "expr",  # bitwise-or chains
        "xor_expr",
        "and_expr",
        "shift_expr",
        "arith_expr",
        "term",
        "power",
    }
)

_AUG_OPS = frozenset(
    {"+=", "-=", "*=", "/=", "//=", "%=", "@=", "&=", "|=", "^=", ">>=", "<<=", "**="}
)


# -- pass 1: quote unification ----------------------------------------------


def _requote_plain(body: str) -> str:
    """Re-escape a double-quoted body for single-quote delimiters."""
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            # A parsed literal never ends in a lone backslash.
            nxt = body[i + 1]
            if nxt == '"':
                out.append('"')
            else:
                out.append(ch)
                out.append(nxt)
            i += 2
        elif ch == "'":
            out.append("\\'")
            i += 1
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _convert_string_leaf(code: str) -> str | None:
    """Single-quoted form of one string literal, or None to leave it."""
    quote_at = 0
    while code[quote_at] not in "\"'":
        quote_at += 1
    prefix, rest = code[:quote_at], code[quote_at:]
    if rest.startswith(('"""', "'''")) or rest[0] == "'":
        return None
    body = rest[1:-1]
    if "r" in prefix.lower():
        # Raw strings cannot re-escape; swap only when no quote conflicts.
        if "'" in body:
            return None
        return prefix + "'" + body + "'"
    return prefix + "'" + _requote_plain(body) + "'"


def _convert_fstring(node) -> str | None:
    start = node.children[0].value
    end = node.children[-1].value
    if start.endswith(('"""', "'''")) or start[-1] == "'":
        return None
    code = node.get_code(include_prefix=False)
    body = code[len(start) : len(code) - len(end)]
    # Expression parts cannot be re-escaped, so require no single quotes.
    if "'" in body:
        return None
    return start[:-1] + "'" + body + "'"


def _normalize_quotes(text: str) -> tuple[str, int]:
    tree = parse(text)
    starts = line_starts(text)
    edits = []
    for node in _walk(tree.root):
        if node.type == "string":
            new = _convert_string_leaf(node.value)
        elif node.type == "fstring":
            new = _convert_fstring(node)
        else:
            continue
        if new is None:
            continue
        begin = pos_to_offset(starts, node.start_pos)
        edits.append(Edit(begin, pos_to_offset(starts, node.end_pos), new))
    return apply_edits(text, edits), len(edits)


def _walk(node):
    yield node
    for child in getattr(node, "children", ()):
        if node.type == "fstring":
            break  # handled whole
        yield from _walk(child)


# -- pass 2: precedence parentheses ------------------------------------------


def _in_fstring(node) -> bool:
    cur = node.parent
    while cur is not None:
        if cur.type == "fstring":
            return True
        cur = cur.parent
    return False


def _add_precedence_parens(text: str) -> tuple[str, int]:
    tree = parse(text)
    wraps = 0

    def transform(node, rendered):
        nonlocal wraps
        # f-string innards stay verbatim: a `=` debug specifier echoes
        # the expression source into the runtime value.
        if node.type not in _BINARY_NODES or _in_fstring(node):
            return None
        parts = list(rendered)
        changed = False
        for i in range(0, len(parts), 2):
            child = node.children[i]
            if child.type in _BINARY_NODES and child.type != node.type:
                prefix = child.get_first_leaf().prefix
                parts[i] = prefix + "(" + parts[i][len(prefix) :] + ")"
                wraps += 1
                changed = True
        return "".join(parts) if changed else None

    return rewrite(tree.root, transform), wraps


# -- pass 3: operator spacing -------------------------------------------------


def _is_binary_usage(leaf) -> bool:
    parent = leaf.parent.type
    value = leaf.value
    if leaf.type == "keyword":
        # Operand keywords (None, True, ...) share parents with these.
        if value in ("and", "or"):
            return parent in ("and_test", "or_test")
        if value in ("in", "is", "not"):
            return parent in ("comparison", "comp_op")
        return False
    if value == "=":
        return parent in ("expr_stmt", "annassign")
    if value == ":=":
        return parent == "namedexpr_test"
    if value == "->":
        return parent == "funcdef"
    if value in _AUG_OPS:
        return parent == "expr_stmt"
    return parent in _BINARY_NODES


def _regularize_spacing(text: str) -> tuple[str, int]:
    tree = parse(text)
    starts = line_starts(text)
    fixes: dict[tuple[int, int], str] = {}
    for leaf in _walk(tree.root):
        if getattr(leaf, "children", None) is not None:
            continue
        if leaf.type not in ("operator", "keyword") or not _is_binary_usage(leaf):
            continue
        for side in (leaf, leaf.get_next_leaf()):
            if side is None or side.type == "endmarker":
                continue
            gap = side.prefix
            # Pure horizontal space means a same-line gap; anything else
            # (newline, comment, backslash) is layout to keep.
            if gap == " " or (gap and not set(gap) <= {" ", "\t"}):
                continue
            begin = pos_to_offset(starts, side.start_pos) - len(gap)
            fixes[(begin, begin + len(gap))] = " "
    edits = [Edit(b, e, new) for (b, e), new in fixes.items()]
    return apply_edits(text, edits), len(edits)


def apply_norm(unit: CodeUnit) -> OperatorOutcome:
    text, quoted = _normalize_quotes(unit.text)
    text, wrapped = _add_precedence_parens(text)
    text, spaced = _regularize_spacing(text)
    if text == unit.text:
        return OperatorOutcome.unchanged(OperatorId.NORM, unit.text, "already normalized")
    return OperatorOutcome(
        OperatorId.NORM, True, quoted + wrapped + spaced, text, []
    )
