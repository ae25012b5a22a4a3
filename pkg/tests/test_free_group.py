"""Reduced words: normal form, roots, text syntax."""

import pytest
from hypothesis import given, strategies as st

from autfix.free_group import (
    RankMismatch,
    Word,
    WordSyntaxError,
    conjugate,
    cyclically_reduce,
    format_word,
    parse_word,
    primitive_root,
    reduce,
    reduce_letters,
    words_up_to,
)

from conftest import words

raw_letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=14)


def test_reduce_examples():
    assert reduce([1, 2, -2, -1], 2) == Word.identity(2)
    assert reduce([1, 1, -1, 2], 2).letters == (1, 2)
    assert reduce([], 3).letters == ()


@given(raw_letters)
def test_reduce_is_idempotent_and_reduced(raw):
    w = reduce_letters(raw)
    assert reduce_letters(w) == w
    assert all(a != -b for a, b in zip(w, w[1:]))


@given(raw_letters, raw_letters)
def test_reduction_respects_concatenation(a, b):
    assert reduce_letters(reduce_letters(a) + reduce_letters(b)) == reduce_letters(a + b)


@given(words(3), words(3), words(3))
def test_group_axioms(u, v, w):
    e = Word.identity(3)
    assert (u * v) * w == u * (v * w)
    assert u * e == u == e * u
    assert u * ~u == e
    assert ~(u * v) == ~v * ~u


def test_word_rejects_unreduced_and_out_of_range():
    with pytest.raises(ValueError):
        Word((1, -1), 2)
    with pytest.raises(ValueError):
        Word((3,), 2)


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        Word((1,), 2) * Word((1,), 3)


def test_conjugate_is_g_inverse_w_g(xyz):
    assert conjugate(xyz("x"), xyz("y")) == xyz("y^-1 x y")


def test_cyclically_reduce(xyz):
    core, c = cyclically_reduce(xyz("y^-1 x y y"))
    assert core == xyz("x y") and c == xyz("y^-1")
    core, c = cyclically_reduce(xyz("x y"))
    assert core == xyz("x y") and c == Word.identity(3)


@given(words(3, 12))
def test_cyclic_decomposition(w):
    core, c = cyclically_reduce(w)
    assert c * core * ~c == w
    if len(core) > 1:
        assert core.letters[0] != -core.letters[-1]


def test_primitive_root(xyz):
    assert primitive_root(xyz("x x x")) == (xyz("x"), 3)
    assert primitive_root(xyz("y x x y^-1 y x x y^-1")) == (xyz("y x y^-1"), 4)
    assert primitive_root(xyz("x y")) == (xyz("x y"), 1)
    with pytest.raises(ValueError):
        primitive_root(Word.identity(3))


@given(words(2, 6).filter(bool), st.integers(1, 4))
def test_root_of_power(w, k):
    root, e = primitive_root(w)
    r2, e2 = primitive_root(w ** k)
    assert r2 == root and e2 == e * k
    assert root ** e == w


def test_words_up_to_counts_and_order():
    ws = list(words_up_to(2, 3))
    assert len(ws) == 1 + 4 + 12 + 36
    assert ws == sorted(ws, key=Word.sort_key)
    assert [format_word(w) for w in ws[1:5]] == ["x", "x^-1", "y", "y^-1"]


def test_text_round_trip(xyz):
    w = xyz("y x^-1 z")
    assert format_word(w) == "y x^-1 z"
    assert parse_word(format_word(w), 3) == w
    assert format_word(Word.identity(3)) == "1"
    assert xyz("yXz") == w
    assert xyz("y*x^-1*z") == w
    assert parse_word("a1 a4^-1", 4) == Word((1, -4), 4)


@given(words(3))
def test_format_parse_inverse(w):
    assert parse_word(format_word(w), 3) == w


def test_syntax_error_reports_column():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("x q", 3, line=7)
    assert info.value.line == 7 and info.value.column == 3
