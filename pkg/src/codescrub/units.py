"""Source files and the code units extracted from them.

A code unit is the granularity everything downstream operates on: a method,
a class, or a whole file, stored dedented so it parses standalone.
"""

from __future__ import annotations

import json
import re
import textwrap
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from . import pytree
from .errors import ParseFailure

_ID_SAFE = re.compile(r"[^A-Za-z0-9_.-]+")


class Language(Enum):
    PYTHON = "python"
    JAVA = "java"

    @classmethod
    def from_path(cls, path: str) -> "Language":
        suffix = Path(path).suffix.lower()
        if suffix == ".py":
            return cls.PYTHON
        if suffix == ".java":
            return cls.JAVA
        raise ValueError(f"cannot infer language from {path!r}")


class Granularity(Enum):
    METHOD = "method"
    CLASS = "class"
    FILE = "file"


@dataclass
class SourceFile:
    path: str
    language: Language
    text: str
    metadata: dict = field(default_factory=dict)

    @classmethod
    def read(
        cls,
        path: str | Path,
        language: Language | None = None,
        metadata: dict | None = None,
    ) -> "SourceFile":
        p = Path(path)
        lang = language or Language.from_path(str(p))
        return cls(
            path=str(p),
            language=lang,
            text=p.read_text(encoding="utf-8"),
            metadata=metadata or {},
        )


@dataclass
class CodeUnit:
    id: str
    language: Language
    granularity: Granularity
    text: str
    path: str = "<memory>"
    qualname: str = ""
    start_line: int = 1
    end_line: int = 0  # 0 means "derive from text length"
    stratum: str = ""  # optional grouping label for stratified sampling

    @property
    def line_span(self) -> tuple[int, int]:
        if self.end_line:
            return (self.start_line, self.end_line)
        n_lines = max(1, len(self.text.rstrip("\n").splitlines()))
        return (self.start_line, self.start_line + n_lines - 1)

    @property
    def loc(self) -> int:
        return sum(1 for line in self.text.splitlines() if line.strip())


def sanitize_id(raw: str) -> str:
    return _ID_SAFE.sub("_", raw).strip("_")


def make_unit_id(path: str, qualname: str, line: int) -> str:
    stem = sanitize_id(path)
    if qualname:
        stem = f"{stem}__{sanitize_id(qualname)}"
    return f"{stem}__L{line}"


def extract_units(
    source: SourceFile,
    granularity: Granularity = Granularity.METHOD,
    include_nested: bool = False,
) -> list[CodeUnit]:
    """Pull code units out of one source file.

    Method granularity yields top-level functions and class methods; nested
    functions join in only when include_nested is set. Class granularity
    yields class definitions. File granularity yields the file whole.
    """
    if source.language is Language.JAVA:
        from .javasrc import extract_java_units

        return extract_java_units(source, granularity, include_nested)
    if granularity is Granularity.FILE:
        return [
            CodeUnit(
                id=make_unit_id(source.path, "", 1),
                language=source.language,
                granularity=granularity,
                text=source.text,
                path=source.path,
                qualname="",
                start_line=1,
            )
        ]
    tree = pytree.parse(source.text, strict=True)
    wanted = "funcdef" if granularity is Granularity.METHOD else "classdef"
    units = []
    for node in tree.find_all(wanted):
        if not include_nested and _inside_function(node):
            continue
        if granularity is Granularity.CLASS and _inside_class(node):
            continue
        text, line, end_line = _node_unit_text(tree, node)
        qualname = _qualname(node)
        units.append(
            CodeUnit(
                id=make_unit_id(source.path, qualname, line),
                language=source.language,
                granularity=granularity,
                text=text,
                path=source.path,
                qualname=qualname,
                start_line=line,
                end_line=end_line,
            )
        )
    return units


def unit_from_text(
    text: str,
    language: Language = Language.PYTHON,
    unit_id: str = "unit",
    granularity: Granularity = Granularity.METHOD,
) -> CodeUnit:
    """Wrap a bare code string as a unit (testing and one-off CLI input)."""
    if isinstance(language, str):
        language = Language(language)
    if language is Language.PYTHON:
        pytree.parse(text, strict=True)
    return CodeUnit(
        id=sanitize_id(unit_id), language=language, granularity=granularity, text=text
    )


def unit_to_dict(unit: CodeUnit) -> dict:
    return {
        "id": unit.id,
        "language": unit.language.value,
        "granularity": unit.granularity.value,
        "text": unit.text,
        "path": unit.path,
        "qualname": unit.qualname,
        "start_line": unit.start_line,
        "end_line": unit.end_line,
        "stratum": unit.stratum,
    }


def unit_from_dict(data: dict) -> CodeUnit:
    try:
        return CodeUnit(
            id=data["id"],
            language=Language(data["language"]),
            granularity=Granularity(data["granularity"]),
            text=data["text"],
            path=data.get("path", "<memory>"),
            qualname=data.get("qualname", ""),
            start_line=data.get("start_line", 1),
            end_line=data.get("end_line", 0),
            stratum=data.get("stratum", ""),
        )
    except (KeyError, ValueError) as exc:
        raise ParseFailure(f"malformed unit record: {exc}") from exc


def write_units(units: Iterable[CodeUnit], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for unit in units:
            fh.write(json.dumps(unit_to_dict(unit), sort_keys=True) + "\n")


def read_units(path: str | Path) -> list[CodeUnit]:
    units = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                units.append(unit_from_dict(json.loads(line)))
    return units


def _inside_function(node) -> bool:
    cur = node.parent
    while cur is not None:
        if cur.type in ("funcdef", "lambdef"):
            return True
        cur = cur.parent
    return False


def _inside_class(node) -> bool:
    cur = node.parent
    while cur is not None:
        if cur.type == "classdef":
            return True
        cur = cur.parent
    return False


def _qualname(node) -> str:
    parts = [node.children[1].value]
    cur = node.parent
    while cur is not None:
        if cur.type in ("funcdef", "classdef"):
            parts.append(cur.children[1].value)
        cur = cur.parent
    return ".".join(reversed(parts))


def _node_unit_text(tree: pytree.PyTree, node) -> tuple[str, int, int]:
    """Slice the node's full lines (decorators included) and dedent."""
    target = node
    if node.parent is not None and node.parent.type == "decorated":
        target = node.parent
    start_line = target.start_pos[0]
    start = tree.offset((start_line, 0))
    end = tree.offset(target.end_pos)
    snippet = tree.text[start:end]
    end_line = start_line + max(0, len(snippet.rstrip("\n").splitlines()) - 1)
    text = textwrap.dedent(snippet)
    if not text.endswith("\n"):
        text += "\n"
    if not pytree.parses(text):
        raise ParseFailure(f"extracted unit at line {start_line} does not parse standalone")
    return text, start_line, end_line
