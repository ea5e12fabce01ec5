import pytest

from codescrub.errors import ConfigError
from codescrub.ops.lexicon import load_lexicon, parse_lexicon
from codescrub.ops.words import (
    is_lower_camel,
    is_lower_snake,
    match_case,
    segment_spans,
    split_identifier,
    strip_underscores,
    to_camel,
    to_snake,
)


def test_split_identifier_handles_both_conventions():
    assert split_identifier("current_row") == ["current", "row"]
    assert split_identifier("currentRow") == ["current", "Row"]
    assert split_identifier("parseHTTPResponse") == ["parse", "HTTP", "Response"]
    assert split_identifier("value2go") == ["value2go"]
    assert split_identifier("_private_name_") == ["private", "name"]


def test_segment_spans_index_into_name():
    name = "num_attributes"
    spans = segment_spans(name)
    assert [name[a:b] for a, b in spans] == ["num", "attributes"]


def test_strip_underscores_keeps_edges():
    assert strip_underscores("__magic__") == ("__", "magic", "__")
    assert strip_underscores("_x") == ("_", "x", "")
    assert strip_underscores("plain") == ("", "plain", "")


def test_style_predicates():
    assert is_lower_snake("current_row")
    assert not is_lower_snake("single")
    assert not is_lower_snake("Current_Row")
    assert is_lower_camel("currentRow")
    assert not is_lower_camel("CurrentRow")
    assert not is_lower_camel("current_row")
    # a__b has an empty segment; neither style applies
    assert not is_lower_snake("a__b")
    assert not is_lower_camel("a__b")


def test_case_conversions_round_trip_simple_names():
    assert to_camel("current_row") == "currentRow"
    assert to_snake("currentRow") == "current_row"
    assert to_snake(to_camel("num_attributes")) == "num_attributes"
    # Acronym case is lost by design: the flip is lower-snake <-> lower-camel.
    assert to_snake("parseHTTPResponse") == "parse_http_response"
    assert to_camel("parse_http_response") == "parseHttpResponse"


def test_match_case_shapes():
    assert match_case("Total", "sum") == "Sum"
    assert match_case("TOTAL", "sum") == "SUM"
    assert match_case("total", "SUM") == "sum"
    assert match_case("T", "sum") == "Sum"


def test_parse_lexicon_reads_tsv():
    lex = parse_lexicon("new\tadvanced,fresh\ncount\ttally,num\n", "inline")
    assert lex.synonyms("NEW") == ("advanced", "fresh")
    assert "count" in lex
    assert lex.synonyms("missing") == ()
    assert len(lex) == 2


@pytest.mark.parametrize(
    "bad",
    [
        "noseparator\n",
        "Bad Word\tx,y\n",
        "word\tUPPER,ok\n",
        "word\t\n",
        "dup\ta\ndup\tb\n",
    ],
)
def test_parse_lexicon_rejects_malformed(bad):
    with pytest.raises(ConfigError) as err:
        parse_lexicon(bad, "inline")
    assert "inline:" in str(err.value)


def test_packaged_lexicon_loads_and_is_identifier_safe():
    lex = load_lexicon()
    assert len(lex) > 300
    assert lex.synonyms("new")[0] == "advanced"
    for word, syns in lex.entries.items():
        assert word.isidentifier() and word.islower()
        for syn in syns:
            assert syn.isidentifier() and syn.islower()


def test_missing_lexicon_path_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_lexicon(str(tmp_path / "nope.tsv"))
