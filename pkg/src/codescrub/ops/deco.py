"""Decorator attachment: wrap each function with a timing or memory probe.

Helper definitions are injected at the top of the unit so the result runs
standalone; wrappers pass arguments and return values through untouched.
"""

from __future__ import annotations

from .. import pytree
from ..textspan import Edit, apply_edits
from ..units import CodeUnit
from .base import OperatorId, OperatorOutcome

_DECORATOR_NAMES = ("timing", "measure_memory_usage")

_HELPER_BLOCK = '''\
import functools
import time
import tracemalloc


def timing(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        started = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            elapsed = time.perf_counter() - started
            print(f'{func.__name__} took {elapsed:.6f} seconds')
    return wrapper


def measure_memory_usage(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        tracing = tracemalloc.is_tracing()
        if not tracing:
            tracemalloc.start()
        try:
            return func(*args, **kwargs)
        finally:
            _, peak = tracemalloc.get_traced_memory()
            if not tracing:
                tracemalloc.stop()
            print(f'{func.__name__} used {peak} bytes at peak')
    return wrapper


'''


def _existing_decorator_names(funcdef) -> set[str]:
    names = set()
    parent = funcdef.parent
    if parent is not None and parent.type == "async_funcdef":
        parent = parent.parent
    if parent is None or parent.type != "decorated":
        return names
    decorators = parent.children[0]
    nodes = decorators.children if decorators.type == "decorators" else [decorators]
    for deco in nodes:
        for leaf in deco.children:
            if leaf.type == "name":
                names.add(leaf.value)
                break
            if leaf.type == "dotted_name":
                names.add(leaf.get_last_leaf().value)
                break
    return names


def apply_deco(unit: CodeUnit) -> OperatorOutcome:
    tree = pytree.parse(unit.text, strict=True)
    funcdefs = tree.find_all("funcdef")
    notes: list[str] = []
    if not funcdefs:
        return OperatorOutcome.unchanged(OperatorId.DECO, unit.text, "no function definitions")
    defined = pytree.all_name_tokens(tree)
    if any(name in defined for name in _DECORATOR_NAMES):
        return OperatorOutcome.unchanged(
            OperatorId.DECO, unit.text, "unit already defines a helper name"
        )
    edits = []
    sites = 0
    for index, funcdef in enumerate(funcdefs):
        # round-robin keeps the choice deterministic without a seed
        deco_name = _DECORATOR_NAMES[index % len(_DECORATOR_NAMES)]
        if deco_name in _existing_decorator_names(funcdef):
            notes.append(f"{funcdef.children[1].value} already bears @{deco_name}")
            continue
        anchor = funcdef
        if funcdef.parent is not None and funcdef.parent.type == "async_funcdef":
            anchor = funcdef.parent
        indent = pytree.node_indent(tree, anchor)
        start, _ = tree.node_span(anchor, include_prefix=False)
        edits.append(Edit(start, start, f"@{deco_name}\n{indent}"))
        sites += 1
    if sites == 0:
        return OperatorOutcome.unchanged(OperatorId.DECO, unit.text, notes[0] if notes else None)
    edits.insert(0, Edit(0, 0, _HELPER_BLOCK))
    new_text = apply_edits(unit.text, edits)
    return OperatorOutcome(OperatorId.DECO, True, sites, new_text, notes)
