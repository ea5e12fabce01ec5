"""Lossless Python parsing built on parso.

The round-trip guarantee (render(parse(t)) == t) is what lets the operators
splice rewritten statements back into otherwise untouched source.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Optional

import parso
from parso.tree import NodeOrLeaf

from .errors import ParseFailure
from .textspan import line_starts, pos_to_offset

GRAMMAR_VERSION = "3.10"

SCOPE_NODE_TYPES = {"funcdef", "lambdef", "classdef"}
COMP_CONTAINER_TYPES = {"testlist_comp", "dictorsetmaker", "argument"}


@lru_cache(maxsize=1)
def _grammar():
    return parso.load_grammar(version=GRAMMAR_VERSION)


class PyTree:
    """A parsed Python module plus the offset table for its source."""

    language = "python"

    def __init__(self, text: str, root, errors):
        self.text = text
        self.root = root
        self.errors = errors
        self.line_starts = line_starts(text)

    @property
    def valid(self) -> bool:
        return not self.errors

    def render(self) -> str:
        return self.root.get_code()

    def offset(self, pos: tuple[int, int]) -> int:
        return pos_to_offset(self.line_starts, pos)

    def leaf_span(self, leaf) -> tuple[int, int]:
        start = self.offset(leaf.start_pos)
        return start, start + len(leaf.value)

    def node_span(self, node, include_prefix: bool = False) -> tuple[int, int]:
        first = node.get_first_leaf()
        last = node.get_last_leaf()
        start = self.offset(first.start_pos)
        if include_prefix:
            start -= len(first.prefix)
        return start, self.offset(last.start_pos) + len(last.value)

    def walk(self, root=None) -> Iterator[NodeOrLeaf]:
        stack = [root or self.root]
        while stack:
            node = stack.pop()
            yield node
            children = getattr(node, "children", None)
            if children:
                stack.extend(reversed(children))

    def find_all(self, *types: str, root=None) -> list:
        """All nodes of the given types, in document order."""
        found = [n for n in self.walk(root) if n.type in types]
        found.sort(key=lambda n: n.start_pos)
        return found


def parse(text: str, strict: bool = True) -> PyTree:
    """Parse Python source; raise ParseFailure on syntax errors when strict.

    With strict=False the (error-recovered) tree is returned with the error
    list attached, so callers can inspect partially valid input.
    """
    grammar = _grammar()
    root = grammar.parse(text)
    errors = list(grammar.iter_errors(root))
    if errors and strict:
        first = errors[0]
        raise ParseFailure(
            f"{first.message} at line {first.start_pos[0]}, column {first.start_pos[1]}",
            line=first.start_pos[0],
            column=first.start_pos[1],
        )
    return PyTree(text, root, errors)


def parses(text: str) -> bool:
    try:
        parse(text)
        return True
    except ParseFailure:
        return False


def code_of(node, include_prefix: bool = False) -> str:
    return node.get_code(include_prefix=include_prefix)


def innermost_funcdef(tree: PyTree):
    """First top-level funcdef of a unit, or None."""
    for node in tree.walk():
        if node.type == "funcdef":
            return node
    return None


def enclosing(node, *types: str):
    cur = node.parent
    while cur is not None:
        if cur.type in types:
            return cur
        cur = cur.parent
    return None


def defined_funcdefs(tree: PyTree, root=None) -> list:
    return tree.find_all("funcdef", root=root)


def suite_statements(suite_or_stmt) -> list:
    """Statements of a suite node; an inline simple_stmt yields itself."""
    if suite_or_stmt.type == "suite":
        return [c for c in suite_or_stmt.children if c.type not in ("newline",)]
    return [suite_or_stmt]


def is_comp_container(node) -> bool:
    children = getattr(node, "children", None)
    if not children or node.type not in COMP_CONTAINER_TYPES:
        return False
    return any(c.type in ("sync_comp_for", "comp_for") for c in children)


def scope_containers(tree: PyTree) -> list:
    """Pre-order list of nodes that open a new Python scope.

    Mirrors the scope tree the compiler builds: module, functions, lambdas,
    classes, and each comprehension/generator expression.
    """
    out = [tree.root]

    def visit(node):
        for child in getattr(node, "children", []):
            if child.type in SCOPE_NODE_TYPES or is_comp_container(child):
                out.append(child)
            visit(child)

    visit(tree.root)
    return out


def all_name_tokens(tree: PyTree) -> set[str]:
    """Every identifier-looking token in the source (collision avoidance)."""
    return {n.value for n in tree.walk() if n.type == "name"}


def fresh_name(base: str, taken: set[str], start: int = 1) -> str:
    """Numbered fresh name: first of base1, base2, ... not in taken."""
    i = start
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def available_name(base: str, taken: set[str]) -> str:
    """The base name itself when free, else the first numbered variant."""
    return base if base not in taken else fresh_name(base, taken)


def node_indent(tree: PyTree, node) -> str:
    """Indentation of the line on which `node` starts."""
    first = node.get_first_leaf()
    prefix = first.prefix
    if "\n" in prefix:
        return prefix[prefix.rfind("\n") + 1:]
    # Statement at the very start of the text: prefix is the whole indent.
    if tree.offset(first.start_pos) - len(prefix) == 0:
        return prefix
    return " " * first.start_pos[1]
