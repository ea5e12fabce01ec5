"""Java implementations of the if-flip, loop-exchange, renaming, and
normalization operators over the lossless token stream.

The transforms splice token spans rather than build a syntax tree:
branch and body text is carried verbatim (inner sites are rewritten
recursively first), so comments and line layout inside moved code
survive. Sites whose single-statement branches open another compound
statement are skipped instead of guessed at.
"""

from __future__ import annotations

import random

from ..errors import PreconditionError, UnsupportedOperator
from ..javasrc import JAVA_KEYWORDS, JavaTokens
from ..units import CodeUnit
from . import words
from .base import OperatorId, OperatorOutcome, RefactorConfig, derive_seed
from .lexicon import load_lexicon

_COMPOUND_KEYWORDS = frozenset(
    {"if", "for", "while", "do", "try", "switch", "synchronized", "else"}
)

# Primitive/inference keywords that can start a declaration's type.
_TYPE_KEYWORDS = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double", "var", "final"}
)


def _text_of(jt: JavaTokens, lo: int, hi: int) -> str:
    return "".join(t.text for t in jt.tokens[lo:hi])


def _stmt_end(jt: JavaTokens, i: int, hi: int) -> int | None:
    """Index just past the statement starting at code token ``i``.

    Blocks end at their matching brace; simple statements at the first
    top-level semicolon. Compound statements return None so the caller
    skips rather than second-guesses dangling-else binding.
    """
    toks = jt.tokens
    t = toks[i]
    if t.kind == "op" and t.text == "{":
        return jt.match(i) + 1
    if t.kind == "keyword" and t.text in _COMPOUND_KEYWORDS:
        return None
    depth = 0
    j = i
    while j < hi:
        tok = toks[j]
        if tok.kind == "op":
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth -= 1
            elif tok.text == ";" and depth == 0:
                return j + 1
        j += 1
    return None


# -- IFF -----------------------------------------------------------------


def _flip_ifs(jt: JavaTokens, lo: int, hi: int, state: dict) -> str:
    toks = jt.tokens
    out = []
    i = lo
    while i < hi:
        t = toks[i]
        if not (t.kind == "keyword" and t.text == "if"):
            out.append(t.text)
            i += 1
            continue
        prev = jt.prev_code(i)
        if prev is not None and toks[prev].kind == "keyword" and toks[prev].text == "else":
            state["notes"].add("skipped else-if chain")
            out.append(t.text)
            i += 1
            continue
        lp = jt.next_code(i)
        if lp is None or toks[lp].text != "(":
            out.append(t.text)
            i += 1
            continue
        rp = jt.match(lp)
        then_start = jt.next_code(rp)
        then_end = _stmt_end(jt, then_start, hi) if then_start is not None else None
        if then_end is None:
            state["notes"].add("skipped if: branch opens a compound statement")
            out.append(t.text)
            i += 1
            continue
        else_kw = jt.next_code(then_end - 1)
        has_else = (
            else_kw is not None
            and else_kw < hi
            and toks[else_kw].kind == "keyword"
            and toks[else_kw].text == "else"
        )
        if has_else:
            else_start = jt.next_code(else_kw)
            if toks[else_start].kind == "keyword" and toks[else_start].text == "if":
                state["notes"].add("skipped else-if chain")
                out.append(t.text)
                i += 1
                continue
            else_end = _stmt_end(jt, else_start, hi)
            if else_end is None:
                state["notes"].add("skipped if: branch opens a compound statement")
                out.append(t.text)
                i += 1
                continue
        cond = _text_of(jt, lp + 1, rp).strip()
        then_text = _flip_ifs(jt, then_start, then_end, state)
        if has_else:
            else_text = _flip_ifs(jt, else_start, else_end, state)
            out.append(f"if (!({cond})) {else_text} else {then_text}")
            i = else_end
        else:
            out.append(f"if (!({cond})) {{}} else {then_text}")
            i = then_end
        state["sites"] += 1
    return "".join(out)


# -- LOOP ----------------------------------------------------------------


def _top_level_ops(jt: JavaTokens, lo: int, hi: int, symbol: str) -> list[int]:
    depth = 0
    found = []
    for j in range(lo, hi):
        t = jt.tokens[j]
        if t.kind != "op":
            continue
        if t.text in "([{":
            depth += 1
        elif t.text in ")]}":
            depth -= 1
        elif t.text == symbol and depth == 0:
            found.append(j)
    return found


def _is_declaration(jt: JavaTokens, lo: int, hi: int) -> bool:
    """True when the init clause declares variables (type name ...)."""
    prev = None
    for j in range(lo, hi):
        t = jt.tokens[j]
        if not t.is_code:
            continue
        if t.kind == "ident" and prev is not None:
            if prev.kind == "ident" or prev.text in (">", "]"):
                return True
            if prev.kind == "keyword" and prev.text in _TYPE_KEYWORDS:
                return True
        prev = t
    return False


def _split_expr_list(jt: JavaTokens, lo: int, hi: int) -> list[str]:
    """Comma-separated expressions of a for-header clause, as statements."""
    if lo >= hi:
        return []
    text = _text_of(jt, lo, hi).strip()
    if not text:
        return []
    if _is_declaration(jt, lo, hi):
        return [text + ";"]
    pieces = []
    start = lo
    for comma in _top_level_ops(jt, lo, hi, ","):
        pieces.append(_text_of(jt, start, comma).strip() + ";")
        start = comma + 1
    pieces.append(_text_of(jt, start, hi).strip() + ";")
    return [p for p in pieces if p != ";"]


def _contains_keyword(jt: JavaTokens, lo: int, hi: int, word: str) -> bool:
    return any(
        t.kind == "keyword" and t.text == word for t in jt.tokens[lo:hi]
    )


def _exchange_loops(jt: JavaTokens, lo: int, hi: int, state: dict) -> str:
    toks = jt.tokens
    out = []
    i = lo
    while i < hi:
        t = toks[i]
        if t.kind == "keyword" and t.text == "while":
            lp = jt.next_code(i)
            if lp is None or toks[lp].text != "(":
                out.append(t.text)
                i += 1
                continue
            rp = jt.match(lp)
            body_start = jt.next_code(rp)
            # A semicolon here is the tail of a do-while.
            if body_start is None or toks[body_start].text == ";":
                out.append(t.text)
                i += 1
                continue
            body_end = _stmt_end(jt, body_start, hi)
            if body_end is None:
                state["notes"].add("skipped while: body opens a compound statement")
                out.append(t.text)
                i += 1
                continue
            cond = _text_of(jt, lp + 1, rp).strip()
            body = _exchange_loops(jt, body_start, body_end, state)
            out.append(f"for (; {cond}; ) {body}")
            state["sites"] += 1
            i = body_end
            continue
        if t.kind == "keyword" and t.text == "for":
            lp = jt.next_code(i)
            if lp is None or toks[lp].text != "(":
                out.append(t.text)
                i += 1
                continue
            rp = jt.match(lp)
            semis = _top_level_ops(jt, lp + 1, rp, ";")
            if len(semis) != 2:
                state["notes"].add("skipped enhanced for")
                out.append(t.text)
                i += 1
                continue
            body_start = jt.next_code(rp)
            body_end = _stmt_end(jt, body_start, hi) if body_start is not None else None
            if body_end is None:
                state["notes"].add("skipped for: body opens a compound statement")
                out.append(t.text)
                i += 1
                continue
            if _contains_keyword(jt, body_start, body_end, "continue"):
                # continue would bypass the relocated update clause
                state["notes"].add("skipped for: body contains continue")
                out.append(t.text)
                i += 1
                continue
            init = _split_expr_list(jt, lp + 1, semis[0])
            cond = _text_of(jt, semis[0] + 1, semis[1]).strip() or "true"
            update = _split_expr_list(jt, semis[1] + 1, rp)
            body = _exchange_loops(jt, body_start, body_end, state)
            if toks[body_start].text == "{" and body.rstrip().endswith("}"):
                cut = body.rfind("}")
                inner = body[:cut] + " " + " ".join(update) + " " + body[cut:]
            else:
                inner = "{ " + body.rstrip().rstrip(";") + "; " + " ".join(update) + " }"
            pieces = init + [f"while ({cond}) {inner}"]
            out.append("{ " + " ".join(pieces) + " }")
            state["sites"] += 1
            i = body_end
            continue
        out.append(t.text)
        i += 1
    return "".join(out)


# -- RENM ----------------------------------------------------------------


def _declared_names(jt: JavaTokens) -> dict[str, int]:
    """Local variable/parameter names -> index of the declaring token."""
    toks = jt.tokens
    declared: dict[str, int] = {}
    for idx, t in enumerate(toks):
        if t.kind != "ident" or t.text in declared:
            continue
        nxt = jt.next_code(idx)
        prev = jt.prev_code(idx)
        if nxt is None or prev is None:
            continue
        if toks[nxt].text not in ("=", ";", ",", ":", ")"):
            continue
        p = toks[prev]
        is_type = (
            p.kind == "ident"
            or p.text in (">", "]")
            or (p.kind == "keyword" and p.text in _TYPE_KEYWORDS)
        )
        if not is_type:
            continue
        pp = jt.prev_code(prev)
        if pp is not None and toks[pp].text == ".":
            continue  # qualified expression, not a type
        declared[t.text] = idx
    return declared


def _occurrence_indexes(jt: JavaTokens, name: str, from_idx: int) -> list[int]:
    toks = jt.tokens
    found = []
    for idx in range(from_idx, len(toks)):
        t = toks[idx]
        if t.kind != "ident" or t.text != name:
            continue
        prev = jt.prev_code(idx)
        if prev is not None and toks[prev].text in (".", "::"):
            continue
        nxt = jt.next_code(idx)
        if nxt is not None and toks[nxt].text == "(":
            continue  # method reference/call
        found.append(idx)
    return found


def _apply_java_renm(unit: CodeUnit, seed: int, config: RefactorConfig) -> OperatorOutcome:
    jt = JavaTokens(unit.text)
    lexicon = load_lexicon(config.synonym_lexicon_path)
    declared = _declared_names(jt)
    if not declared:
        return OperatorOutcome.unchanged(
            OperatorId.RENM, unit.text, "no renameable identifiers"
        )
    occurrences = {
        name: _occurrence_indexes(jt, name, decl_idx)
        for name, decl_idx in declared.items()
    }
    order = sorted(occurrences)
    rng = random.Random(seed)
    rng.shuffle(order)
    order.sort(key=lambda name: -len(occurrences[name]))

    taken = {t.text for t in jt.tokens if t.kind == "ident"} | JAVA_KEYWORDS
    renames: dict[str, str] = {}
    notes = []
    for name in order:
        if len(renames) == config.max_renames:
            break
        new_name, reason = _java_synonym(name, lexicon, taken)
        if new_name is None:
            notes.append(f"skipped {name}: {reason}")
            continue
        renames[name] = new_name
        taken.add(new_name)
    if not renames:
        return OperatorOutcome(OperatorId.RENM, False, 0, unit.text, notes)

    texts = [t.text for t in jt.tokens]
    for name, new_name in renames.items():
        for idx in occurrences[name]:
            texts[idx] = new_name
        notes.append(f"renamed {name} -> {new_name}")
    return OperatorOutcome(
        OperatorId.RENM, True, len(renames), "".join(texts), notes
    )


def _java_synonym(name, lexicon, taken) -> tuple[str | None, str]:
    found_entry = False
    for start, end in reversed(words.segment_spans(name)):
        segment = name[start:end]
        synonyms = lexicon.synonyms(segment)
        found_entry = found_entry or bool(synonyms)
        for synonym in synonyms:
            candidate = name[:start] + words.match_case(segment, synonym) + name[end:]
            if candidate != name and candidate not in taken:
                return candidate, ""
    return None, ("all synonyms collide" if found_entry else "no lexicon entry")


# -- NORM ----------------------------------------------------------------

# Comparison angles and shifts stay out: they collide with generics.
_JAVA_BINARY = frozenset(
    {
        "=", "==", "!=", "<=", ">=", "&&", "||", "->",
        "+", "-", "*", "/", "%", "&", "|", "^",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    }
)
_NEEDS_VALUE_BEFORE = frozenset({"+", "-", "*", "&", "|"})  # else unary/wildcard


def _is_java_binary(jt: JavaTokens, idx: int) -> bool:
    t = jt.tokens[idx]
    if t.kind != "op" or t.text not in _JAVA_BINARY:
        return False
    prev = jt.prev_code(idx)
    if prev is None:
        return False
    p = jt.tokens[prev]
    value_like = p.kind in ("ident", "number", "string", "char") or p.text in (")", "]")
    if t.text in _NEEDS_VALUE_BEFORE:
        return value_like
    return True


def _apply_java_norm(unit: CodeUnit) -> OperatorOutcome:
    jt = JavaTokens(unit.text)
    toks = jt.tokens
    pieces = [t.text for t in toks]
    sites = 0
    for idx in range(len(toks)):
        if not _is_java_binary(jt, idx):
            continue
        for side in (idx - 1, idx + 1):
            if side < 0 or side >= len(toks):
                continue
            gap = toks[side]
            if gap.kind == "ws":
                if "\n" not in gap.text and gap.text != " ":
                    pieces[side] = " "
                    sites += 1
            elif gap.is_code:
                # no whitespace token here at all; pad the operator
                if side == idx - 1 and not pieces[idx].startswith(" "):
                    pieces[idx] = " " + pieces[idx]
                    sites += 1
                elif side == idx + 1 and not pieces[idx].endswith(" "):
                    pieces[idx] = pieces[idx] + " "
                    sites += 1
    text = "".join(pieces)
    if text == unit.text:
        return OperatorOutcome.unchanged(OperatorId.NORM, unit.text, "already normalized")
    return OperatorOutcome(OperatorId.NORM, True, sites, text, [])


# -- dispatch --------------------------------------------------------------


def apply(unit: CodeUnit, operator: OperatorId, config: RefactorConfig) -> OperatorOutcome:
    seed = derive_seed(config.seed, unit.id, operator.value)
    if operator is OperatorId.RENM:
        return _apply_java_renm(unit, seed, config)
    if operator is OperatorId.NORM:
        return _apply_java_norm(unit)
    if operator in (OperatorId.IFF, OperatorId.LOOP):
        jt = JavaTokens(unit.text)
        state = {"sites": 0, "notes": set()}
        walker = _flip_ifs if operator is OperatorId.IFF else _exchange_loops
        text = walker(jt, 0, len(jt.tokens), state)
        notes = sorted(state["notes"])
        if state["sites"] == 0:
            return OperatorOutcome(operator, False, 0, unit.text, notes)
        return OperatorOutcome(operator, True, state["sites"], text, notes)
    raise UnsupportedOperator(f"{operator.value} is not available for java")
