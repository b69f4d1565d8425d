from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from feelgrid.braille import LINE_CELLS, paginate, pages_for_text, translate

# hand-translated against the shipped cell table: dots -> bitmask with
# bit0=dot1 .. bit5=dot6
I, N, T, E, R, S = 10, 29, 30, 17, 23, 14
NUM = 60  # number sign, dots 3456
DOT = 50  # '.', dots 256
PCT = 57  # '%'


def test_interest_label_matches_hand_translation():
    # "interest 0.25%" worked out cell by cell from the table
    expected = [I, N, T, E, R, E, S, T, 0, NUM, 26, DOT, 3, E, PCT]
    assert translate("interest 0.25%") == expected


def test_case_folds():
    assert translate("Interest") == translate("interest")


def test_number_sign_once_per_digit_run():
    cells = translate("2020-Q2")
    # run "2020", hyphen, q, run "2"
    assert cells == [NUM, 3, 26, 3, 26, 36, 31, NUM, 3]


def test_decimal_point_stays_in_number_run():
    assert translate("0.1") == [NUM, 26, DOT, 1]
    # trailing period is punctuation, not part of the run
    assert translate("10.") == [NUM, 1, 26, DOT]


def test_unknown_characters_become_blank_cells():
    assert translate("a?b") == [1, 0, 3]


def test_empty_text_no_pages():
    assert pages_for_text("") == []


def test_45_letter_label_pages_by_ceiling_division():
    text = "x" * 45
    pages = pages_for_text(text)
    assert len(pages) == 3  # ceil(45/20)
    assert [len(p) for p in pages] == [20, 20, 5]


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz ,.-%0123456789", max_size=200))
def test_pages_never_exceed_line_width(text):
    for page in pages_for_text(text):
        assert 0 < len(page) <= LINE_CELLS
        assert all(0 <= cell <= 63 for cell in page)


@given(st.lists(st.integers(min_value=0, max_value=63), max_size=100))
def test_paginate_preserves_cells(cells):
    pages = paginate(cells)
    flat = [c for page in pages for c in page]
    assert flat == cells
