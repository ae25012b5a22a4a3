"""Filtered graphs, upper triangular maps and the path calculus."""

import random

import pytest

from autfix.automorphism import Automorphism, compose, inner
from autfix.filtered_graph import (
    FilteredGraph,
    IncidenceError,
    NotUpperTriangular,
    SearchBoundExhausted,
    UpperTriangularMap,
    apply_path,
    basic_decomposition,
    find_pq,
    height,
    is_basic,
    is_G_reduced,
    is_splitting,
    make_G_reduced,
    marked_automorphism,
    rose,
    stays_G_reduced_check,
)
from autfix.free_group import parse_word
from autfix.samples import random_path, random_upper_triangular, sample_graphs


def two_vertex_graph():
    # E1 loop at v0, E2 v0 -> v1, E3 v1 -> v0, E4 loop at v1
    return FilteredGraph(["v0", "v1"], [(0, 0), (0, 1), (1, 0), (1, 1)])


def test_graph_basics():
    G = two_vertex_graph()
    assert G.rank == 3 and G.n_edges == 4
    assert G.outgoing(0) == [1, -1, 2, -3]
    assert G.tree == frozenset({2})
    assert G.free_edges == (1, 3, 4)
    assert G.is_loop((2, 3)) and not G.is_loop((2,))
    with pytest.raises(IncidenceError):
        G.check_path((1, 3))


def test_graph_validation():
    with pytest.raises(ValueError):
        FilteredGraph(["v0", "v1"], [(0, 0)])
    with pytest.raises(ValueError):
        FilteredGraph(["v0", "v1"], [(0, 1), (0, 1)], tree=[1, 2])


def test_marking_round_trip():
    G = two_vertex_graph()
    for text in ("x", "y z^-1", "x y x^-1 z z"):
        w = parse_word(text, 3)
        loop = G.word_to_loop(w)
        assert G.is_loop(loop, 0)
        assert G.loop_to_word(loop) == w


def test_upper_triangular_validation():
    G = rose(2)
    with pytest.raises(NotUpperTriangular):
        UpperTriangularMap(G, [(), (2,)])
    with pytest.raises(NotUpperTriangular, match="subdivide"):
        UpperTriangularMap.from_images(G, {2: (1, 2)})
    H = two_vertex_graph()
    with pytest.raises(NotUpperTriangular, match="loop"):
        UpperTriangularMap(H, [(), (), (2,), ()])


def test_apply_path_examples():
    G = rose(2)
    f = UpperTriangularMap(G, [(), (1,)])
    assert apply_path(f, (2,)) == (2, 1)
    assert apply_path(f, (1,)) == (1,)
    with pytest.raises(ValueError):
        apply_path(f, (2, -2))
    assert apply_path(f, (2, 1, -2)) == (2, 1, -2)
    g = UpperTriangularMap(G, [(), (1, 1)])
    assert apply_path(g, (2, -1, -2)) == (2, -1, -2)


def test_compose_power_inverse():
    G = two_vertex_graph()
    f = UpperTriangularMap(G, [(), (), (1,), (3, -1, 2)])
    finv = f.inverse()
    ident = UpperTriangularMap.identity(G)
    assert f.compose(finv) == ident and finv.compose(f) == ident
    assert f.power(3) == f.compose(f.compose(f))
    assert f.power(-2) == finv.compose(finv)


def test_marked_automorphism():
    G = rose(2)
    f = UpperTriangularMap(G, [(), (1,)])
    assert marked_automorphism(f) == Automorphism([parse_word("x", 2), parse_word("y x", 2)])
    assert marked_automorphism(UpperTriangularMap.identity(G)) == Automorphism.identity(2)
    p = (2, 1)
    assert marked_automorphism(f, p) == compose(inner(parse_word("y x", 2)), marked_automorphism(f))


def test_marked_automorphism_composes():
    rng = random.Random(3)
    for G in sample_graphs(rng, 6):
        f, g = random_upper_triangular(rng, G), random_upper_triangular(rng, G)
        assert marked_automorphism(f.compose(g)) == compose(marked_automorphism(f), marked_automorphism(g))


def test_basic_decomposition_examples():
    assert basic_decomposition((2, 1, -2)) == [(2, 1, -2)]
    pieces = basic_decomposition((2, 1, -2, 1, 2, -1))
    assert pieces == [(2, 1, -2), (1,), (2, -1)]
    assert basic_decomposition((1,)) == [(1,)]
    assert basic_decomposition((1, 1)) == [(1,), (1,)]
    assert basic_decomposition((1, -3, 2, 3)) == [(1, -3), (2,), (3,)]
    with pytest.raises(ValueError):
        basic_decomposition(())


def test_is_basic():
    assert is_basic((2, 1)) and is_basic((1, -2)) and is_basic((2, 1, -2))
    assert not is_basic((1, 2, 1))
    assert not is_basic((2, 1, 2))


def test_make_G_reduced():
    G = rose(3)
    assert make_G_reduced(G, (3, 1)) == ((), (3, 1))
    delta, beta = make_G_reduced(G, (1, 3, 2, -1))
    assert delta == (1,) and beta == (3, 2)
    delta, beta = make_G_reduced(G, (2, 1, -3, 1))
    assert is_G_reduced(beta) and height(delta) <= 3
    assert make_G_reduced(G, (1,)) == ((), (1,))


def test_find_pq():
    G = rose(2)
    alpha = (2, 1)
    beta = (2, -1, 2)
    p, q = find_pq(G, alpha, beta, 12)
    assert p >= 1 and q >= 1
    assert find_pq(G, alpha, (2,), 12, method="scan") == (1, 1)
    with pytest.raises(ValueError):
        find_pq(G, alpha, (2, 1, 2, 1), 12)


def test_find_pq_bound_reported():
    G = rose(2)
    with pytest.raises(SearchBoundExhausted):
        find_pq(G, (2, 1), (-1, -2, -1, -2, 1, 2), 1, method="scan")


def test_calculus_properties_smoke():
    # the full randomized sweep lives in the acceptance suite
    rng = random.Random(11)
    for G in sample_graphs(rng, 5):
        f = random_upper_triangular(rng, G)
        for _ in range(40):
            path = random_path(rng, G, rng.randint(1, 8))
            if not path:
                continue
            assert is_splitting(f, basic_decomposition(path), 3)
            assert apply_path(f, path)
            if is_G_reduced(path) and G.is_loop(path):
                assert stays_G_reduced_check(f, path)
