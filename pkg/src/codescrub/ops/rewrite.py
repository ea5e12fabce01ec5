"""Bottom-up tree-to-text rewriting.

Transforms that move whole branches (if-flip, loop exchange) cannot be
expressed as non-overlapping span edits when sites nest, so they rebuild
text recursively: children are rendered first, then the node's transform
sees its children's final text and reassembles.
"""

from __future__ import annotations

from typing import Callable

# transform(node, rendered_children) -> replacement text, or None to keep
Transform = Callable[[object, list[str]], "str | None"]


def rewrite(root, transform: Transform) -> str:
    def rec(node) -> str:
        children = getattr(node, "children", None)
        if not children:
            return node.get_code()
        rendered = [rec(c) for c in children]
        out = transform(node, rendered)
        return out if out is not None else "".join(rendered)

    return rec(root)


def leading_ws(rendered: str) -> str:
    """The whitespace/comment prefix a rendered node starts with."""
    stripped = rendered.lstrip()
    return rendered[: len(rendered) - len(stripped)]


def indent_from_prefix(prefix: str, fallback: str = "") -> str:
    """Indentation of the line a node starts: text after the prefix's last newline."""
    if "\n" in prefix:
        return prefix[prefix.rfind("\n") + 1 :]
    return fallback
