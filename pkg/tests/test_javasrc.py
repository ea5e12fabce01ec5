import pytest
from hypothesis import given
from hypothesis import strategies as st

from codescrub.errors import ParseFailure
from codescrub.javasrc import JavaTokens, extract_java_units, java_parses, lex
from codescrub.units import Granularity, Language, SourceFile

JAVA = '''package demo;

// cache of parsed rows
public class RowCache {
    private int rowCount = 0;

    public int addRow(String line) {
        if (line == null) {
            return -1;
        }
        rowCount += 1;
        return rowCount;
    }

    /* multi
       line */
    public String describe() {
        String label = "rows: " + rowCount;
        return label;
    }
}

class Helper {
    static int twice(int x) { return x * 2; }
}
'''


def test_lex_round_trips_exactly():
    assert "".join(t.text for t in lex(JAVA)) == JAVA


def test_lex_classifies_tokens():
    kinds = {t.text: t.kind for t in lex(JAVA) if t.is_code}
    assert kinds["class"] == "keyword"
    assert kinds["rowCount"] == "ident"
    assert kinds["{"] == "op"
    assert kinds['"rows: "'] == "string"
    assert kinds["0"] == "number"


def test_comments_and_strings_are_atomic():
    tokens = lex('String s = "a { b // }"; // trailing { comment\n/* x } */')
    strings = [t for t in tokens if t.kind == "string"]
    comments = [t for t in tokens if t.kind == "comment"]
    assert [t.text for t in strings] == ['"a { b // }"']
    assert len(comments) == 2
    # Braces inside literals and comments never count for pairing.
    assert java_parses('String s = "a { b"; // }\n')


def test_bracket_pairs_match():
    jt = JavaTokens("int f() { int[] a = new int[2]; return a[0]; }")
    for open_idx, close_idx in jt.pairs.items():
        a, b = jt.tokens[open_idx], jt.tokens[close_idx]
        assert {a.text, b.text} in ({"(", ")"}, {"{", "}"}, {"[", "]"})


def test_java_parses_rejects_unbalanced():
    assert not java_parses("int f() { return 1; ")
    assert not java_parses("int f() ) { }")
    assert not java_parses('String s = "unterminated;')
    with pytest.raises(ParseFailure) as err:
        JavaTokens("void g() { if (x) { } ")
    assert err.value.line is not None


def test_extract_java_methods():
    source = SourceFile("demo/RowCache.java", Language.JAVA, JAVA)
    units = extract_java_units(source, Granularity.METHOD)
    names = [u.qualname for u in units]
    assert names == ["RowCache.addRow", "RowCache.describe", "Helper.twice"]
    for unit in units:
        assert java_parses(unit.text), unit.qualname
        assert unit.language is Language.JAVA


def test_extract_java_classes():
    source = SourceFile("demo/RowCache.java", Language.JAVA, JAVA)
    units = extract_java_units(source, Granularity.CLASS)
    assert [u.qualname for u in units] == ["RowCache", "Helper"]
    assert units[0].text.startswith("public class RowCache")


def test_method_unit_text_spans_whole_body():
    source = SourceFile("d/F.java", Language.JAVA, JAVA)
    unit = next(
        u
        for u in extract_java_units(source, Granularity.METHOD)
        if u.qualname.endswith("addRow")
    )
    assert unit.text.rstrip().endswith("}")
    assert "rowCount += 1;" in unit.text


@given(st.text(alphabet=st.sampled_from("abc(){}[];= \n\"'"), max_size=60))
def test_lex_total_or_fails_cleanly(text):
    # Lexing either reproduces the text exactly or raises ParseFailure;
    # it never silently drops characters.
    try:
        tokens = lex(text)
    except ParseFailure:
        return
    assert "".join(t.text for t in tokens) == text
