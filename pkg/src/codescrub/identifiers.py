"""Scope-aware identifier resolution over parso trees.

parso supplies lossless positions; the stdlib symtable supplies the exact
binding semantics (locals, params, cells, free variables, implicit globals,
class-scope skipping). The two scope trees are zipped in pre-order, which
matches because both enumerate scopes in source order.
"""

from __future__ import annotations

import builtins
import keyword
import symtable
from dataclasses import dataclass, field
from enum import Enum

from .errors import ParseFailure
from .pytree import PyTree, is_comp_container, scope_containers
from .textspan import Edit, apply_edits

RESERVED_NAMES = frozenset(keyword.kwlist) | frozenset(keyword.softkwlist) | frozenset(dir(builtins))

# Conventional receiver parameters are never rename targets.
RECEIVER_NAMES = frozenset({"self", "cls"})


class IdentifierKind(Enum):
    VARIABLE = "variable"
    PARAMETER = "parameter"
    FUNCTION_NAME = "function_name"
    CLASS_NAME = "class_name"
    ATTRIBUTE = "attribute"


@dataclass
class IdentifierBinding:
    name: str
    kind: IdentifierKind
    occurrences: list[tuple[int, int]] = field(default_factory=list)
    is_reserved: bool = False
    scope_index: int | None = None  # None for attribute/keyword-arg groups
    is_import: bool = False
    is_external: bool = False  # resolves outside the unit (builtin/unbound)

    @property
    def occurrence_count(self) -> int:
        return len(self.occurrences)


@dataclass
class _Scope:
    index: int
    node: object
    table: symtable.SymbolTable
    parent: int | None

    @property
    def is_function(self) -> bool:
        return self.table.get_type() == "function"

    @property
    def is_class(self) -> bool:
        return self.table.get_type() == "class"


class ScopeModel:
    """Binding model for one parsed unit."""

    def __init__(self, tree: PyTree):
        self.tree = tree
        self.scopes = self._build_scopes(tree)
        self._by_node = {id(s.node): s for s in self.scopes}
        self.bindings, self._leaf_binding = self._collect(tree)

    # -- scope construction -------------------------------------------------

    @staticmethod
    def _st_preorder(table):
        ordered: list[tuple[symtable.SymbolTable, int | None]] = []

        def rec(t, parent_idx):
            idx = len(ordered)
            ordered.append((t, parent_idx))
            for ch in t.get_children():
                rec(ch, idx)

        rec(table, None)
        return ordered

    def _build_scopes(self, tree: PyTree) -> list[_Scope]:
        try:
            top = symtable.symtable(tree.text, "<unit>", "exec")
        except SyntaxError as exc:
            raise ParseFailure(str(exc), line=exc.lineno, column=exc.offset) from exc
        st_list = self._st_preorder(top)
        containers = scope_containers(tree)
        if len(st_list) != len(containers):
            raise ParseFailure(
                f"scope mismatch: {len(st_list)} symbol tables vs {len(containers)} syntactic scopes"
            )
        scopes = []
        for i, ((table, parent), node) in enumerate(zip(st_list, containers)):
            scopes.append(_Scope(index=i, node=node, table=table, parent=parent))
        return scopes

    # -- leaf -> scope assignment -------------------------------------------

    def _owning_scope(self, leaf) -> _Scope:
        cur = leaf
        prev = leaf
        while cur is not None:
            scope = self._by_node.get(id(cur))
            if scope is not None:
                adjusted = self._adjust_for_header(scope, cur, prev, leaf)
                if adjusted is not None:
                    return adjusted
            prev = cur
            cur = cur.parent
        return self.scopes[0]

    def _adjust_for_header(self, scope: _Scope, container, via_child, leaf) -> _Scope | None:
        """Names in def headers/class bases/first comp iterables belong to the parent scope."""
        parent = self.scopes[scope.parent] if scope.parent is not None else scope
        ctype = container.type
        if ctype == "funcdef":
            # children: def, name, parameters, ['->', annot], ':', suite
            if via_child.type == "suite":
                return scope
            if via_child.type == "parameters":
                return scope if self._is_param_def(leaf) else parent
            return parent
        if ctype == "lambdef":
            if via_child is container.children[-1]:
                return scope
            if via_child.type == "param":
                return scope if self._is_param_def(leaf) else parent
            return parent
        if ctype == "classdef":
            return scope if via_child.type == "suite" else parent
        if is_comp_container(container):
            if self._in_first_comp_iterable(container, leaf):
                return parent
            return scope
        return scope

    @staticmethod
    def _is_param_def(leaf):
        param = leaf.parent
        if param is None or param.type != "param" or leaf.type != "name":
            return False
        for child in param.children:
            if child.type == "operator" and child.value in ("*", "**"):
                continue
            return child is leaf
        return False

    @staticmethod
    def _in_first_comp_iterable(container, leaf):
        comp = next(
            c for c in container.children if c.type in ("sync_comp_for", "comp_for")
        )
        if comp.type == "comp_for":
            comp = next(c for c in comp.children if c.type == "sync_comp_for")
        iterable = comp.children[3]
        cur = leaf
        while cur is not None and cur is not container:
            if cur is iterable:
                return True
            cur = cur.parent
        return False

    # -- resolution ----------------------------------------------------------

    def _resolve(self, leaf) -> tuple[str, object]:
        """Resolve a name leaf to ('scope', _Scope) or ('external', None)."""
        name = leaf.value
        scope = self._owning_scope(leaf)
        seen = 0
        while seen < len(self.scopes) + 1:
            seen += 1
            try:
                sym = scope.table.lookup(name)
            except KeyError:
                return ("external", None)
            if sym.is_local() or sym.is_parameter():
                return ("scope", scope)
            if sym.is_free():
                nxt = self._enclosing_function(scope)
                if nxt is None:
                    return ("external", None)
                scope = nxt
                continue
            if sym.is_global():
                module = self.scopes[0]
                if scope is module:
                    return ("external", None)
                scope = module
                continue
            return ("external", None)
        return ("external", None)

    def _enclosing_function(self, scope: _Scope) -> _Scope | None:
        cur = scope.parent
        while cur is not None:
            cand = self.scopes[cur]
            if cand.is_function:
                return cand
            cur = cand.parent
        return None

    # -- collection ----------------------------------------------------------

    def _collect(self, tree: PyTree):
        bindings: dict[tuple, IdentifierBinding] = {}
        leaf_binding: dict[tuple[int, int], tuple] = {}

        def get(key, name, kind, **flags) -> IdentifierBinding:
            if key not in bindings:
                bindings[key] = IdentifierBinding(
                    name=name,
                    kind=kind,
                    is_reserved=name in RESERVED_NAMES,
                    scope_index=key[1] if key[0] == "scope" else None,
                    **flags,
                )
            return bindings[key]

        for leaf in tree.walk():
            if leaf.type != "name":
                continue
            span = tree.leaf_span(leaf)
            name = leaf.value
            parent = leaf.parent
            if parent is not None and parent.type == "trailer" and parent.children[0].value == ".":
                key = ("attr", name)
                get(key, name, IdentifierKind.ATTRIBUTE).occurrences.append(span)
                leaf_binding[span] = key
                continue
            if (
                parent is not None
                and parent.type == "argument"
                and len(parent.children) >= 2
                and parent.children[0] is leaf
                and parent.children[1].type == "operator"
                and parent.children[1].value == "="
            ):
                key = ("kwarg", name)
                get(key, name, IdentifierKind.ATTRIBUTE).occurrences.append(span)
                leaf_binding[span] = key
                continue
            if parent is not None and parent.type == "dotted_name" and parent.children[0] is not leaf:
                key = ("attr", name)
                get(key, name, IdentifierKind.ATTRIBUTE).occurrences.append(span)
                leaf_binding[span] = key
                continue
            where, scope = self._resolve(leaf)
            if where == "external":
                key = ("external", name)
                b = get(key, name, IdentifierKind.VARIABLE, is_external=True)
            else:
                key = ("scope", scope.index, name)
                b = get(key, name, self._kind_of(scope, name))
                sym = scope.table.lookup(name)
                if sym.is_imported():
                    b.is_import = True
            b.occurrences.append(span)
            leaf_binding[span] = key
        for b in bindings.values():
            b.occurrences.sort()
        return bindings, leaf_binding

    @staticmethod
    def _kind_of(scope: _Scope, name: str) -> IdentifierKind:
        sym = scope.table.lookup(name)
        if sym.is_namespace():
            ns = sym.get_namespaces()[0]
            return (
                IdentifierKind.CLASS_NAME
                if ns.get_type() == "class"
                else IdentifierKind.FUNCTION_NAME
            )
        if scope.is_class:
            return IdentifierKind.ATTRIBUTE
        if sym.is_parameter():
            return IdentifierKind.PARAMETER
        return IdentifierKind.VARIABLE

    # -- public helpers -------------------------------------------------------

    def binding_at(self, span: tuple[int, int]) -> IdentifierBinding | None:
        key = self._leaf_binding.get(span)
        return self.bindings.get(key) if key is not None else None

    def all_bindings(self) -> list[IdentifierBinding]:
        return list(self.bindings.values())

    def kwarg_names(self) -> set[str]:
        return {k[1] for k in self.bindings if k[0] == "kwarg"}

    def renameable(self) -> list[IdentifierBinding]:
        """Local variables and parameters that can be safely renamed."""
        kwargs_used = self.kwarg_names()
        out = []
        for key, b in self.bindings.items():
            if key[0] != "scope":
                continue
            if b.kind not in (IdentifierKind.VARIABLE, IdentifierKind.PARAMETER):
                continue
            scope = self.scopes[b.scope_index]
            if not scope.is_function:
                continue
            if b.is_reserved or b.is_import or b.name in RECEIVER_NAMES:
                continue
            if b.kind is IdentifierKind.PARAMETER and b.name in kwargs_used:
                continue
            out.append(b)
        return out


def collect_identifiers(tree: PyTree) -> list[IdentifierBinding]:
    return ScopeModel(tree).all_bindings()


def rename_in_text(text: str, bindings: list[tuple[IdentifierBinding, str]]) -> str:
    """Rewrite every occurrence of each binding with its new name."""
    edits = []
    for binding, new_name in bindings:
        for start, end in binding.occurrences:
            if text[start:end] != binding.name:
                raise ValueError(
                    f"occurrence at {start} is {text[start:end]!r}, expected {binding.name!r}"
                )
            edits.append(Edit(start, end, new_name))
    return apply_edits(text, edits)


_STORE_PARENT_SLOTS = {
    "for_stmt": 1,
    "sync_comp_for": 1,
}


def is_store_leaf(leaf) -> bool:
    """True when this name leaf rebinds its name (assignment-like position)."""
    node = leaf
    while node.parent is not None:
        parent = node.parent
        ptype = parent.type
        if ptype in ("trailer",):
            return False  # attribute/subscript target mutates, not rebinds
        if ptype == "expr_stmt":
            idx = parent.children.index(node)
            for child in parent.children:
                ctype = child.type
                is_assign = (
                    ctype == "operator" and child.value == "="
                ) or ctype == "annassign" or (
                    ctype == "operator" and child.value.endswith("=") and child.value not in ("==", "!=", "<=", ">=")
                )
                if is_assign:
                    return idx < parent.children.index(child)
            return False
        if ptype in _STORE_PARENT_SLOTS:
            slot = parent.children[_STORE_PARENT_SLOTS[ptype]]
            return node is slot or _contains(slot, leaf)
        if ptype == "comp_for":
            node = parent
            continue
        if ptype == "namedexpr_test":
            return parent.children[0] is node
        if ptype == "del_stmt":
            return True
        if ptype == "global_stmt" or ptype == "nonlocal_stmt":
            return True
        if ptype == "with_item":
            # with expr as target
            kids = parent.children
            return len(kids) == 3 and (kids[2] is node or _contains(kids[2], leaf))
        if ptype == "except_clause":
            kids = parent.children
            return len(kids) >= 4 and kids[3] is node
        if ptype in ("funcdef", "classdef"):
            return parent.children[1] is node
        if ptype == "param":
            return ScopeModel._is_param_def(leaf)
        if ptype in ("testlist_star_expr", "exprlist", "testlist", "atom", "star_expr", "testlist_comp", "operator"):
            node = parent
            continue
        if ptype in ("simple_stmt", "suite", "file_input", "if_stmt", "while_stmt"):
            return False
        node = parent
    return False


def _contains(node, leaf) -> bool:
    cur = leaf
    while cur is not None:
        if cur is node:
            return True
        cur = cur.parent
    return False
