"""Stallings graphs: membership, rank, intersection."""

import pytest
from hypothesis import given, strategies as st

from autfix import stallings
from autfix.free_group import Word, parse_word, words_up_to

from conftest import words


def W(text, rank=3):
    return parse_word(text, rank)


def test_fold_x_squared_is_a_two_cycle():
    G = stallings.fold([W("x x", 2)])
    assert G.n_vertices == 2 and stallings.rank(G) == 1
    dot = stallings.to_dot(G)
    assert dot.count('[label="x"]') == 2


def test_membership():
    G = stallings.fold([W("x"), W("y x y^-1")])
    assert stallings.member(G, W("y x x y^-1 x"))
    assert not stallings.member(G, W("y"))
    assert stallings.member(G, Word.identity(3))


def test_whole_and_trivial():
    assert stallings.equal_subgroups(stallings.fold([W("x"), W("y"), W("z")]), stallings.whole_group(3))
    assert stallings.equal_subgroups(stallings.fold([W("x y"), W("y")]), stallings.fold([W("x"), W("y")]))
    assert stallings.rank(stallings.trivial_subgroup(3)) == 0


def test_worked_intersection():
    a = stallings.fold([W("x"), W("z"), W("y x y^-1")])
    b = stallings.fold([W("x"), W("y"), W("z x z^-1")])
    expected = stallings.fold([W("x"), W("y x y^-1"), W("z x z^-1")])
    assert stallings.equal_subgroups(stallings.intersect(a, b), expected)


def test_basis_generates_and_is_free():
    G = stallings.fold([W("x y x^-1"), W("x x"), W("y x y")])
    B = stallings.basis(G)
    assert len(B) == stallings.rank(G)
    assert stallings.equal_subgroups(stallings.fold(B, 3), G)


def test_equal_subgroups_means_identical_graphs():
    a = stallings.fold([W("x"), W("y x y^-1")])
    b = stallings.fold([W("y x^-1 y^-1"), W("x^-1")])
    assert a == b


@given(st.lists(words(2, 5).filter(bool), min_size=1, max_size=3), st.lists(words(2, 5).filter(bool), min_size=1, max_size=3))
def test_intersection_matches_membership(gs, hs):
    G, H = stallings.fold(gs, 2), stallings.fold(hs, 2)
    K = stallings.intersect(G, H)
    for w in words_up_to(2, 5):
        assert stallings.member(K, w) == (stallings.member(G, w) and stallings.member(H, w))


@given(st.lists(words(3, 6).filter(bool), min_size=1, max_size=4))
def test_basis_words_are_members(gs):
    G = stallings.fold(gs, 3)
    assert all(stallings.member(G, g) for g in gs)
    assert all(stallings.member(G, b) for b in stallings.basis(G))
    assert stallings.contains(G, stallings.fold(stallings.basis(G), 3))
