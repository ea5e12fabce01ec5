"""Iteration style exchange: element loops become index loops and back.

for row in data: f(row)          <->  for row in range(len(data)): f(data[row])

A site only converts when it provably keeps meaning: the loop variable must
not escape the loop, be rebound in the body, or (for the reverse direction)
be used for anything but indexing the same sequence expression.
"""

from __future__ import annotations

from .. import pytree
from ..identifiers import ScopeModel, is_store_leaf
from ..textspan import Edit, apply_edits
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome


def _stable_expr(node) -> bool:
    """Syntactically re-evaluable sequence expression: no calls, no lazy atoms."""
    t = node.type
    if t == "name" or t == "string" or t == "strings":
        return True
    if t == "atom_expr":
        base, *trailers = node.children
        if not _stable_expr(base):
            return False
        return all(tr.children[0].value in (".", "[") for tr in trailers)
    if t == "atom":
        open_ch = node.children[0].value
        if open_ch == "{":
            return False  # dicts iterate keys, sets are unindexable
        inner = node.children[1] if len(node.children) > 2 else None
        if inner is not None and pytree.is_comp_container(inner):
            return False  # comprehension or generator expression
        return True
    return False


def _expr_is_store_target(node) -> bool:
    """Whether this expression node sits in an assignment/del target position."""
    cur = node
    while cur.parent is not None:
        parent = cur.parent
        t = parent.type
        if t == "expr_stmt":
            idx = parent.children.index(cur)
            for child in parent.children:
                is_assign = child.type == "annassign" or (
                    child.type == "operator"
                    and child.value.endswith("=")
                    and child.value not in ("==", "!=", "<=", ">=")
                )
                if is_assign:
                    return idx < parent.children.index(child)
            return False
        if t == "del_stmt":
            return True
        if t in ("for_stmt", "sync_comp_for") and cur is parent.children[1]:
            return True
        if t in ("testlist_star_expr", "exprlist", "testlist", "atom", "star_expr"):
            cur = parent
            continue
        return False
    return False


class _Site:
    def __init__(self, edits: list[Edit], line: int):
        self.edits = edits
        self.line = line


def apply_iter(unit: CodeUnit) -> OperatorOutcome:
    tree = pytree.parse(unit.text, strict=True)
    model = ScopeModel(tree)
    shadowed = {
        key[2] for key in model.bindings if key[0] == "scope"
    }
    notes: list[str] = []
    sites: list[_Site] = []
    leaf_table: dict[tuple[int, int], object] = {}

    def leaf_at(span):
        # Built on first use; the table lives and dies with this call, so
        # lookups can never see a leaf from some other unit's tree.
        if not leaf_table:
            leaf_table.update(
                (tree.leaf_span(leaf), leaf)
                for leaf in tree.walk()
                if leaf.type == "name"
            )
        return leaf_table[span]

    for node in tree.find_all("for_stmt"):
        if len(node.children) > 6:
            notes.append(f"loop at line {node.start_pos[0]}: else clause")
            continue
        if node.parent is not None and node.parent.type == "async_stmt":
            notes.append(f"loop at line {node.start_pos[0]}: async")
            continue
        target, iterable = node.children[1], node.children[3]
        if target.type != "name":
            notes.append(f"loop at line {node.start_pos[0]}: tuple target")
            continue
        site = _index_to_direct(tree, model, node, target, iterable, shadowed, notes, leaf_at)
        if site is None:
            site = _direct_to_index(tree, model, node, target, iterable, shadowed, notes, leaf_at)
        if site is not None:
            sites.append(site)

    accepted: list[Edit] = []
    applied_sites = 0
    for site in sites:
        if _overlaps(accepted, site.edits):
            notes.append(f"loop at line {site.line}: overlaps another converted loop")
            continue
        accepted.extend(site.edits)
        applied_sites += 1
    if applied_sites == 0:
        return OperatorOutcome.unchanged(OperatorId.ITER, unit.text, notes[0] if notes else None)
    new_text = apply_edits(unit.text, accepted)
    return OperatorOutcome(OperatorId.ITER, True, applied_sites, new_text, notes)


def _overlaps(accepted: list[Edit], candidate: list[Edit]) -> bool:
    for a in accepted:
        for b in candidate:
            if a.start < b.end and b.start < a.end:
                return True
    return False


def _loop_occurrences(tree, model, node, target):
    """The target binding's occurrences, split into (header, inside, outside).

    An occurrence inside the iterable expression itself (`for x in x`) makes
    the site unsalvageable, so that returns None too.
    """
    span = tree.node_span(node, include_prefix=False)
    iter_span = tree.node_span(node.children[3], include_prefix=False)
    target_span = tree.leaf_span(target)
    binding = model.binding_at(target_span)
    if binding is None:
        return None
    inside, outside = [], []
    for occ in binding.occurrences:
        if occ == target_span:
            continue
        if iter_span[0] <= occ[0] < iter_span[1]:
            return None
        if span[0] <= occ[0] < span[1]:
            inside.append(occ)
        else:
            outside.append(occ)
    return target_span, inside, outside


def _direct_to_index(tree, model, node, target, iterable, shadowed, notes, leaf_at):
    line = node.start_pos[0]
    if not _stable_expr(iterable):
        notes.append(f"loop at line {line}: iterable may be lazy or single-shot")
        return None
    if "range" in shadowed or "len" in shadowed:
        notes.append(f"loop at line {line}: range/len shadowed in unit")
        return None
    occ_info = _loop_occurrences(tree, model, node, target)
    if occ_info is None:
        return None
    target_span, inside, outside = occ_info
    if outside:
        notes.append(f"loop at line {line}: variable {target.value} escapes the loop")
        return None
    body_span = tree.node_span(node.children[5], include_prefix=False)
    for occ in inside:
        leaf = leaf_at(occ)
        if is_store_leaf(leaf):
            notes.append(f"loop at line {line}: body rebinds {target.value}")
            return None
    root = _root_name(iterable)
    if root is not None:
        root_binding = model.binding_at(tree.leaf_span(root))
        if root_binding is not None:
            for occ in root_binding.occurrences:
                if body_span[0] <= occ[0] < body_span[1] and is_store_leaf(leaf_at(occ)):
                    notes.append(f"loop at line {line}: body rebinds the sequence")
                    return None
    d_code = pytree.code_of(iterable).strip()
    it_start, it_end = tree.node_span(iterable, include_prefix=False)
    edits = [Edit(it_start, it_end, f"range(len({d_code}))")]
    name = target.value
    for occ in inside:
        edits.append(Edit(occ[0], occ[1], f"{d_code}[{name}]"))
    return _Site(edits, line)


def _root_name(node):
    if node.type == "name":
        return node
    if node.type == "atom_expr" and node.children[0].type == "name":
        return node.children[0]
    return None


def _index_to_direct(tree, model, node, target, iterable, shadowed, notes, leaf_at):
    line = node.start_pos[0]
    seq = _range_len_argument(iterable, shadowed)
    if seq is None:
        return None
    if not _stable_expr(seq):
        return None
    occ_info = _loop_occurrences(tree, model, node, target)
    if occ_info is None:
        return None
    target_span, inside, outside = occ_info
    if outside:
        notes.append(f"loop at line {line}: index {target.value} escapes the loop")
        return None
    seq_code = pytree.code_of(seq).strip()
    replacements = []
    for occ in inside:
        leaf = leaf_at(occ)
        if is_store_leaf(leaf):
            notes.append(f"loop at line {line}: body rebinds {target.value}")
            return None
        access = _index_access(tree, leaf, seq_code)
        if access is None:
            notes.append(
                f"loop at line {line}: {target.value} used beyond indexing {seq_code}"
            )
            return None
        replacements.append(access)
    it_start, it_end = tree.node_span(iterable, include_prefix=False)
    edits = [Edit(it_start, it_end, seq_code)]
    for start, end in set(replacements):
        edits.append(Edit(start, end, target.value))
    return _Site(edits, line)


def _range_len_argument(node, shadowed):
    """The X in a `range(len(X))` iterable, else None."""
    if "range" in shadowed or "len" in shadowed:
        return None
    if node.type != "atom_expr" or len(node.children) != 2:
        return None
    head, call = node.children
    if head.type != "name" or head.value != "range":
        return None
    if call.type != "trailer" or call.children[0].value != "(":
        return None
    if len(call.children) != 3:
        return None
    arg = call.children[1]
    if arg.type != "atom_expr" or len(arg.children) != 2:
        return None
    len_head, len_call = arg.children
    if len_head.type != "name" or len_head.value != "len":
        return None
    if len_call.type != "trailer" or len_call.children[0].value != "(" or len(len_call.children) != 3:
        return None
    inner = len_call.children[1]
    return None if inner.type == "arglist" else inner


def _index_access(tree, leaf, seq_code):
    """Span of `seq[leaf]` when the leaf indexes exactly that sequence."""
    trailer = leaf.parent
    if trailer is None or trailer.type != "trailer" or trailer.children[0].value != "[":
        return None
    if len(trailer.children) != 3 or trailer.children[1] is not leaf:
        return None
    expr = trailer.parent
    if expr is None or expr.type != "atom_expr":
        return None
    trailers = expr.children[1:]
    pos = trailers.index(trailer)
    base_code = pytree.code_of(expr.children[0]).strip() + "".join(
        pytree.code_of(t).strip() for t in trailers[:pos]
    )
    if base_code != seq_code:
        return None
    if pos == len(trailers) - 1 and _expr_is_store_target(expr):
        return None
    start, _ = tree.node_span(expr, include_prefix=False)
    _, end = tree.node_span(trailer, include_prefix=False)
    return (start, end)
