"""Deterministic synthetic Python functions for batch-scale tests.

The generator composes small statement templates over a word pool, giving
hundreds of distinct parse-valid functions with loops, branches, string
literals, and multi-word names for the operators to chew on.
"""

from __future__ import annotations

import random

_WORDS = [
    "count", "total", "value", "item", "list", "row", "index", "limit",
    "result", "buffer", "name", "score", "flag", "size", "entry", "cache",
    "input", "output", "left", "right", "chunk", "token", "line", "field",
]

_BIN_OPS = ["+", "-", "*"]
_CMP_OPS = ["<", ">", "<=", ">=", "==", "!="]


def _name(rng: random.Random, used: set[str]) -> str:
    while True:
        name = "_".join(rng.sample(_WORDS, 2))
        if name not in used:
            used.add(name)
            return name


def _condition(rng: random.Random, var: str) -> str:
    kind = rng.randrange(4)
    if kind == 0:
        return f"{var} {rng.choice(_CMP_OPS)} {rng.randrange(10)}"
    if kind == 1:
        return f"{var} % {rng.randrange(2, 5)} == 0"
    if kind == 2:
        return f"{var} > 0 and {var} < {rng.randrange(5, 50)}"
    return f"{var} == 0 or {var} {rng.choice(_CMP_OPS)} {rng.randrange(3)}"


def generate_function(index: int, seed: int = 0) -> str:
    rng = random.Random((seed << 20) ^ index)
    used: set[str] = set()
    func = _name(rng, used)
    param = _name(rng, used)
    acc = _name(rng, used)
    loop_var = _name(rng, used)
    lines = [f"def {func}({param}):", f"    {acc} = {rng.randrange(3)}"]
    body_kind = rng.randrange(4)
    if body_kind == 0:
        lines += [
            f"    for {loop_var} in {param}:",
            f"        if {_condition(rng, loop_var)}:",
            f"            {acc} {rng.choice(['+=', '-='])} {loop_var}",
            "        else:",
            f"            {acc} = {acc} {rng.choice(_BIN_OPS)} 1",
        ]
    elif body_kind == 1:
        lines += [
            f"    for {loop_var} in range(len({param})):",
            f"        {acc} += {param}[{loop_var}] {rng.choice(_BIN_OPS)} {rng.randrange(1, 4)}",
            f"        if {_condition(rng, acc)}:",
            f"            {acc} = -{acc}",
        ]
    elif body_kind == 2:
        aux = _name(rng, used)
        lines += [
            f"    {aux} = 0",
            f"    while {aux} < len({param}):",
            f"        if {_condition(rng, aux)}:",
            f"            {acc} += {param}[{aux}]",
            f"        {aux} += 1",
        ]
    else:
        aux = _name(rng, used)
        lines += [
            f"    {aux} = []",
            f"    for {loop_var} in {param}:",
            f"        if {loop_var} is None or {loop_var} == {rng.randrange(9)}:",
            "            continue",
            f"        {aux}.append({loop_var} {rng.choice(_BIN_OPS)} {rng.randrange(1, 5)})",
            f"    {acc} = len({aux})",
        ]
    if rng.random() < 0.5:
        lines.append(f"    if {_condition(rng, acc)}:")
        lines.append(f"        return {acc} {rng.choice(_BIN_OPS)} {rng.randrange(2, 6)}")
    tail = rng.choice([f"'{func}-%d' % {acc}", acc, f"[{acc}, {acc} + 1]"])
    lines.append(f"    return {tail}")
    return "\n".join(lines) + "\n"


def generate_corpus(count: int = 384, seed: int = 0) -> list[str]:
    return [generate_function(i, seed) for i in range(count)]
