import pytest
from hypothesis import given
from hypothesis import strategies as st

from codescrub.textspan import (
    Edit,
    apply_edits,
    indentation_of,
    line_starts,
    offset_to_pos,
    pos_to_offset,
)

SAMPLE = "alpha\nbeta\n\ngamma delta\n"


def test_line_starts_marks_each_line():
    assert line_starts(SAMPLE) == [0, 6, 11, 12, 24]


def test_pos_offset_round_trip_every_position():
    starts = line_starts(SAMPLE)
    for offset in range(len(SAMPLE)):
        pos = offset_to_pos(starts, offset)
        assert pos_to_offset(starts, pos) == offset


def test_apply_edits_matches_manual_slicing():
    text = "0123456789"
    edits = [Edit(2, 4, "XY"), Edit(7, 7, "__"), Edit(9, 10, "")]
    expected = text[:2] + "XY" + text[4:7] + "__" + text[7:9]
    assert apply_edits(text, edits) == expected


def test_apply_edits_order_independent():
    text = "abcdef"
    edits = [Edit(4, 5, "E"), Edit(0, 1, "A")]
    assert apply_edits(text, edits) == apply_edits(text, list(reversed(edits)))
    assert apply_edits(text, edits) == "AbcdEf"


def test_apply_edits_rejects_overlap():
    with pytest.raises(ValueError):
        apply_edits("abcdef", [Edit(0, 3, "x"), Edit(2, 4, "y")])


def test_apply_edits_allows_adjacent_spans():
    assert apply_edits("abcdef", [Edit(0, 2, "X"), Edit(2, 4, "Y")]) == "XYef"


def test_empty_edit_list_is_identity():
    assert apply_edits(SAMPLE, []) == SAMPLE


@given(st.text(alphabet="ab\n", max_size=40), st.data())
def test_single_edit_matches_slicing(text, data):
    start = data.draw(st.integers(0, len(text)))
    end = data.draw(st.integers(start, len(text)))
    rep = data.draw(st.text(alphabet="xy", max_size=5))
    assert apply_edits(text, [Edit(start, end, rep)]) == text[:start] + rep + text[end:]


def test_indentation_of_reads_leading_whitespace():
    text = "def f():\n    if a:\n\t\treturn 1\n"
    offset_if = text.index("if")
    offset_ret = text.index("return")
    assert indentation_of(text, offset_if) == "    "
    assert indentation_of(text, offset_ret) == "\t\t"
    assert indentation_of(text, 0) == ""
