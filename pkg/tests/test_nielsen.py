"""Common Nielsen paths, sliding, normalization and fixed loop subgroups."""

import random

import pytest

import pairs
from autfix import stallings
from autfix.automorphism import Automorphism, abelianization
from autfix.filtered_graph import (
    FilteredGraph,
    UpperTriangularMap,
    common_INPs_at_height,
    common_nielsen_paths,
    find_common_conjugator,
    fixed_loop_subgroup,
    is_common_NP,
    marked_automorphism,
    normalize,
    rose,
    slide,
)
from autfix.filtered_graph.calculus import SearchBoundExhausted
from autfix.filtered_graph.nielsen import _power_exponent, substitute
from autfix.free_group import invert_letters, parse_word, reduce_letters
from autfix.samples import random_path, random_upper_triangular, sample_graphs

PAIRS = pairs.build()


def test_is_common_NP_example():
    G = rose(2)
    f = UpperTriangularMap(G, [(), (1,)])
    assert is_common_NP(f, f, (2, 1, -2))
    assert not is_common_NP(f, f, (2,))
    assert common_INPs_at_height(f, f, 1, 4) == [(1,)]


def test_INP_enumeration_on_squares():
    f, g, _ = PAIRS["squares"]
    inps = common_INPs_at_height(f, g, 2, 3)
    assert inps[:2] == [(2, 1, -2), (2, -1, -2)]
    assert all(p[0] == 2 and p[-1] == -2 and set(p[1:-1]) <= {1, -1} for p in inps)


def test_common_nielsen_paths_are_fixed():
    f, g, _ = PAIRS["worked"]
    for p in common_nielsen_paths(f, g, 4):
        assert is_common_NP(f, g, p)
    assert (2, 1, -2) in common_nielsen_paths(f, g, 3)


def test_slide_trivial_delta():
    f, g, _ = PAIRS["squares"]
    s = slide(f, g, 2, ())
    assert s.graph is f.graph and s.f == f and s.g == g


def test_slide_along_common_np_fixes_edge():
    f, g, _ = PAIRS["edge slide"]
    s = slide(f, g, 3, (2,))
    assert s.f.suffixes[2] == () and s.g.suffixes[2] == ()


@pytest.mark.parametrize("seed", range(8))
def test_slide_conjugates_marked_automorphism(seed):
    rng = random.Random(seed)
    for G in sample_graphs(rng, 4):
        f, g = random_upper_triangular(rng, G), random_upper_triangular(rng, G)
        for r in range(2, G.n_edges + 1):
            delta = random_path(rng, G, 3, start=G.terminus(r))
            delta = tuple(e for e in delta if abs(e) < r)
            if not G.is_path(delta) or (delta and G.origin(delta[0]) != G.terminus(r)):
                continue
            s = slide(f, g, r, delta)
            # images of loops commute with the homotopy equivalence
            for e in range(1, G.n_edges + 1):
                assert s.f.image_of(s.push((e,))) == s.push(f.image_of((e,)))
            # marked automorphisms agree (same marking of pi_1 through tau)
            assert marked_automorphism(s.f) == marked_automorphism(f)
            assert (abelianization(marked_automorphism(s.g)) == abelianization(marked_automorphism(g))).all()


@pytest.mark.parametrize("name", sorted(PAIRS))
def test_normalize_fixtures(name):
    f, g, expected = PAIRS[name]
    norm = normalize(f, g, 8)
    got = [None if d.form == "none" else (d.form, d.r_f, d.r_g) for d in norm.data]
    assert got == expected
    for d in norm.data:
        u, v = norm.f.suffixes[d.height - 1], norm.g.suffixes[d.height - 1]
        if d.form == "loop":
            assert _power_exponent(u, d.beta) == d.r_f and _power_exponent(v, d.beta) == d.r_g
            assert is_common_NP(norm.f, norm.g, d.beta)
            assert d.inp_unique
        elif d.form == "edge":
            assert u == () and v == ()
    assert marked_automorphism(norm.f) == marked_automorphism(f)
    assert marked_automorphism(norm.g) == marked_automorphism(g)


def test_normalize_strict_raises_on_missing_inp():
    f, g, _ = PAIRS["quadratic"]
    with pytest.raises(SearchBoundExhausted):
        normalize(f, g, 4, escalations=0, strict=True)


def test_fixed_loop_subgroup_examples():
    f, g, _ = PAIRS["squares"]
    H = fixed_loop_subgroup(normalize(f, g))
    assert stallings.equal_subgroups(H, stallings.fold([parse_word("x", 2), parse_word("y x y^-1", 2)]))
    f, g, _ = PAIRS["identity"]
    assert stallings.equal_subgroups(fixed_loop_subgroup(normalize(f, g)), stallings.whole_group(2))


def test_fixed_loop_subgroup_matches_oracle_on_fixtures():
    from autfix.automorphism import fixed_subgroup_oracle

    for name, (f, g, _) in sorted(PAIRS.items()):
        H = fixed_loop_subgroup(normalize(f, g), length_bound=6)
        a = fixed_subgroup_oracle(marked_automorphism(f), 8).graph
        b = fixed_subgroup_oracle(marked_automorphism(g), 8).graph
        assert stallings.equal_subgroups(H, stallings.intersect(a, b)), name


def test_common_conjugator_trivial():
    f, g, _ = PAIRS["worked"]
    assert find_common_conjugator(f, g, (1,), (2, 1, -2), (), ()).delta == ()


def test_common_conjugator_on_rose():
    G = rose(2)
    f = UpperTriangularMap(G, [(), (1, 1)])
    g = UpperTriangularMap(G, [(), (-1,)])
    res = find_common_conjugator(f, g, (1,), (-2, 1, 2), (-1, -1), (1,))
    assert res.delta == (2,)
    assert f.image_of(res.delta) == (2, 1, 1)


def test_common_conjugator_preconditions_checked():
    f, g, _ = PAIRS["worked"]
    with pytest.raises(ValueError):
        find_common_conjugator(f, g, (1,), (1, 1), (), ())
    with pytest.raises(ValueError):
        find_common_conjugator(f, g, (1,), (2,), (), ())


@pytest.mark.parametrize("name", ["worked", "squares", "opposite twists", "two vertices", "theta"])
def test_common_conjugator_random_instances(name):
    f, g, _ = PAIRS[name]
    norm = normalize(f, g)
    f, g, G = norm.f, norm.g, norm.graph
    rng = random.Random(sum(map(ord, name)))
    H = fixed_loop_subgroup(norm, length_bound=None)
    gens = [G.word_to_loop(w) for w in stallings.basis(H)]
    if len(gens) < 2:
        pytest.skip("common fixed subgroup of rank < 2")
    base = G.base
    for _ in range(6):
        delta = random_path(rng, G, rng.randint(0, 3), start=base)
        if delta and not G.is_loop(delta):
            continue
        a1 = reduce_letters(invert_letters(delta) + gens[0] + delta)
        a2 = reduce_letters(invert_letters(delta) + gens[1] + delta)
        mu = reduce_letters(invert_letters(f.image_of(delta)) + delta)
        nu = reduce_letters(invert_letters(g.image_of(delta)) + delta)
        res = find_common_conjugator(f, g, a1, a2, mu, nu)
        d = res.delta
        assert f.image_of(d) == reduce_letters(d + invert_letters(mu))
        assert g.image_of(d) == reduce_letters(d + invert_letters(nu))
