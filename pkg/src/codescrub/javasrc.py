"""Java tokenization and unit extraction.

A full Java grammar is overkill for the four operators supported on Java
(if-flip, loop exchange, renaming, normalization): all of them work on a
lossless token stream plus bracket matching. The lexer below round-trips
byte-for-byte and flags anything it cannot classify.
"""

from __future__ import annotations

import textwrap
from dataclasses import dataclass

from .errors import ParseFailure
from .textspan import line_starts, offset_to_pos

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null
    var record yield sealed permits""".split()
)

# Longest-match first.
_OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=", ">=",
    "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?",
    ":", ";", ",", ".", "(", ")", "{", "}", "[", "]", "@",
]
_OPEN = {"(": ")", "{": "}", "[": "]"}
_CLOSE = {v: k for k, v in _OPEN.items()}


@dataclass
class Token:
    kind: str  # ws | comment | string | char | number | ident | keyword | op
    text: str
    start: int
    end: int

    @property
    def is_code(self) -> bool:
        return self.kind not in ("ws", "comment")


def lex(text: str) -> list[Token]:
    """Tokenize; concatenating token texts reproduces the input exactly."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    starts = line_starts(text)

    def fail(msg: str, at: int):
        line, col = offset_to_pos(starts, at)
        raise ParseFailure(msg, line=line, column=col)

    while i < n:
        c = text[i]
        start = i
        if c.isspace():
            while i < n and text[i].isspace():
                i += 1
            tokens.append(Token("ws", text[start:i], start, i))
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            tokens.append(Token("comment", text[start:i], start, i))
            continue
        if text.startswith("/*", i):
            close = text.find("*/", i + 2)
            if close < 0:
                fail("unterminated block comment", start)
            i = close + 2
            tokens.append(Token("comment", text[start:i], start, i))
            continue
        if text.startswith('"""', i):
            close = text.find('"""', i + 3)
            if close < 0:
                fail("unterminated text block", start)
            i = close + 3
            tokens.append(Token("string", text[start:i], start, i))
            continue
        if c == '"' or c == "'":
            i += 1
            while i < n:
                if text[i] == "\\":
                    i += 2
                    continue
                if text[i] == c:
                    i += 1
                    break
                if text[i] == "\n":
                    fail("unterminated literal", start)
                i += 1
            else:
                fail("unterminated literal", start)
            kind = "string" if c == '"' else "char"
            tokens.append(Token(kind, text[start:i], start, i))
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            i += 1
            while i < n:
                ch = text[i]
                if ch.isalnum() or ch in "._":
                    i += 1
                elif ch in "+-" and text[i - 1] in "eEpP":
                    i += 1
                else:
                    break
            tokens.append(Token("number", text[start:i], start, i))
            continue
        if c.isalpha() or c in "_$":
            i += 1
            while i < n and (text[i].isalnum() or text[i] in "_$"):
                i += 1
            word = text[start:i]
            kind = "keyword" if word in JAVA_KEYWORDS else "ident"
            tokens.append(Token(kind, word, start, i))
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                i += len(op)
                tokens.append(Token("op", op, start, i))
                break
        else:
            fail(f"unexpected character {c!r}", start)
    return tokens


class JavaTokens:
    """Token stream with bracket pairing and code-token navigation."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = lex(text)
        self.pairs = self._match_brackets()

    def _match_brackets(self) -> dict[int, int]:
        pairs: dict[int, int] = {}
        stack: list[int] = []
        starts = line_starts(self.text)
        for idx, tok in enumerate(self.tokens):
            if tok.kind != "op":
                continue
            if tok.text in _OPEN:
                stack.append(idx)
            elif tok.text in _CLOSE:
                if not stack or self.tokens[stack[-1]].text != _CLOSE[tok.text]:
                    line, col = offset_to_pos(starts, tok.start)
                    raise ParseFailure(f"unbalanced {tok.text!r}", line=line, column=col)
                open_idx = stack.pop()
                pairs[open_idx] = idx
                pairs[idx] = open_idx
        if stack:
            tok = self.tokens[stack[-1]]
            line, col = offset_to_pos(starts, tok.start)
            raise ParseFailure(f"unclosed {tok.text!r}", line=line, column=col)
        return pairs

    def render(self) -> str:
        return "".join(t.text for t in self.tokens)

    def next_code(self, idx: int) -> int | None:
        for j in range(idx + 1, len(self.tokens)):
            if self.tokens[j].is_code:
                return j
        return None

    def prev_code(self, idx: int) -> int | None:
        for j in range(idx - 1, -1, -1):
            if self.tokens[j].is_code:
                return j
        return None

    def match(self, idx: int) -> int:
        return self.pairs[idx]


def java_parses(text: str) -> bool:
    try:
        JavaTokens(text)
        return True
    except ParseFailure:
        return False


def _decl_start(jt: JavaTokens, idx: int, floor: int = -1) -> int:
    """Back up from a declaration's name to its first modifier/annotation token."""
    j = idx
    while True:
        p = jt.prev_code(j)
        if p is None or p <= floor:
            break
        t = jt.tokens[p]
        if t.kind == "op" and t.text in (";", "{", "}"):
            break
        j = p
    return j


def find_methods(jt: JavaTokens) -> list[tuple[int, int, str]]:
    """Find (decl_start_idx, close_brace_idx, name) for every method body.

    A method is an identifier directly followed by '(' whose matching ')'
    leads (past an optional throws clause) to '{', at class-member depth.
    """
    out = []
    depth = 0
    i = 0
    toks = jt.tokens
    while i < len(toks):
        t = toks[i]
        if t.kind == "op" and t.text == "{":
            depth += 1
        elif t.kind == "op" and t.text == "}":
            depth -= 1
        elif t.kind == "ident" and depth == 1:
            nxt = jt.next_code(i)
            if nxt is not None and toks[nxt].text == "(" and toks[nxt].kind == "op":
                close = jt.match(nxt)
                after = jt.next_code(close)
                if after is not None and toks[after].kind == "keyword" and toks[after].text == "throws":
                    while after is not None and not (
                        toks[after].kind == "op" and toks[after].text == "{"
                    ):
                        if toks[after].kind == "op" and toks[after].text == ";":
                            after = None
                            break
                        after = jt.next_code(after)
                if after is not None and toks[after].kind == "op" and toks[after].text == "{":
                    body_close = jt.match(after)
                    out.append((_decl_start(jt, i), body_close, t.text))
                    # Step onto the body brace; it still owes a depth bump.
                    depth += 1
                    i = after
        i += 1
    return out


def find_classes(jt: JavaTokens) -> list[tuple[int, int, str]]:
    """Find (decl_start_idx, close_brace_idx, name) for top-level classes."""
    out = []
    depth = 0
    for i, t in enumerate(jt.tokens):
        if t.kind == "op" and t.text == "{":
            depth += 1
        elif t.kind == "op" and t.text == "}":
            depth -= 1
        elif t.kind == "keyword" and t.text in ("class", "interface") and depth == 0:
            name_idx = jt.next_code(i)
            if name_idx is None or jt.tokens[name_idx].kind != "ident":
                continue
            j = name_idx
            while j is not None and not (jt.tokens[j].kind == "op" and jt.tokens[j].text == "{"):
                j = jt.next_code(j)
            if j is None:
                continue
            out.append((_decl_start(jt, i), jt.match(j), jt.tokens[name_idx].text))
    return out


def extract_java_units(source, granularity, include_nested: bool = False):
    """Java counterpart of extract_units; token-level scanning."""
    from .units import CodeUnit, Granularity, Language, make_unit_id

    if granularity is Granularity.FILE:
        return [
            CodeUnit(
                id=make_unit_id(source.path, "", 1),
                language=Language.JAVA,
                granularity=granularity,
                text=source.text,
                path=source.path,
                qualname="",
                start_line=1,
            )
        ]
    jt = JavaTokens(source.text)
    starts = line_starts(source.text)
    if granularity is Granularity.METHOD:
        spans = find_methods(jt)
        # Qualify each method with the top-level class wrapping it.
        classes = find_classes(jt)
        qualified = []
        for decl_idx, close_idx, name in spans:
            owner = next(
                (cn for cd, cc, cn in classes if cd <= decl_idx and close_idx <= cc),
                "",
            )
            qualified.append((decl_idx, close_idx, f"{owner}.{name}" if owner else name))
        spans = qualified
    else:
        spans = find_classes(jt)
    units = []
    for decl_idx, close_idx, name in spans:
        start_off = jt.tokens[decl_idx].start
        # widen to the start of the line, so indentation dedents cleanly
        line, _ = offset_to_pos(starts, start_off)
        start_off = starts[line - 1]
        end_off = jt.tokens[close_idx].end
        snippet = source.text[start_off:end_off]
        text = textwrap.dedent(snippet)
        if not text.endswith("\n"):
            text += "\n"
        end_line = line + max(0, len(snippet.rstrip("\n").splitlines()) - 1)
        units.append(
            CodeUnit(
                id=make_unit_id(source.path, name, line),
                language=Language.JAVA,
                granularity=granularity,
                text=text,
                path=source.path,
                qualname=name,
                start_line=line,
                end_line=end_line,
            )
        )
    return units
