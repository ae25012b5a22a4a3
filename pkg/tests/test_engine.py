"""Choosing k, building and verifying witnesses, the rank dispatcher."""

import itertools
import random

import pytest

import pairs
from autfix import engine, stallings
from autfix.automorphism import Automorphism, compose, fixed_subgroup_oracle, inner, power
from autfix.filtered_graph import NielsenData, UpperTriangularMap, marked_automorphism, normalize, rose
from autfix.free_group import Word, parse_word
from autfix.samples import random_upg_pair


def aut(*images):
    return Automorphism([parse_word(t, len(images)) for t in images])


PHI = aut("x", "y x", "z")
PSI = aut("x", "y", "z x")


def test_choose_k_examples():
    assert engine.choose_k([NielsenData(1, "edge")]) == 1
    assert engine.choose_k([NielsenData(2, "loop", (1,), 2, -1)]) == 3
    assert engine.choose_k([NielsenData(2, "loop", (1,), 1, 0), NielsenData(3, "loop", (1,), 0, 1)]) == 1


def test_choose_k_arithmetic_exhaustive():
    for rf, rg in itertools.product(range(-5, 6), repeat=2):
        k = engine.choose_k([NielsenData(2, "loop", (1,), rf, rg)])
        assert k >= 1
        if (rf, rg) != (0, 0):
            assert rf + k * rg != 0
    for combo in itertools.product(range(-3, 4), repeat=4):
        data = [NielsenData(2, "loop", (1,), combo[0], combo[1]), NielsenData(3, "loop", (1,), combo[2], combo[3])]
        k = engine.choose_k(data)
        assert all(d.r_f + k * d.r_g != 0 for d in data if (d.r_f, d.r_g) != (0, 0))


def test_build_witness():
    f, g, _ = pairs.build()["worked"]
    fgk, chi = engine.build_witness(f, g, 2)
    assert chi == aut("x", "y x", "z x x")
    fg, chi1 = engine.build_witness(f, type(g).identity(g.graph), 1)
    assert chi1 == marked_automorphism(f)


def test_exponent_table_matches_composite():
    f, g, _ = pairs.build()["squares"]
    norm = normalize(f, g)
    for k in range(1, 5):
        fgk, _ = engine.build_witness(norm.f, norm.g, k)
        for h, rf, rg, total in engine.exponent_table(norm, k):
            beta = norm.at(h).beta
            assert fgk.suffixes[h - 1] == (beta * total if total >= 0 else tuple(-e for e in reversed(beta)) * -total)


def test_verify_rejects_k1_on_worked_pair():
    report = engine.verify_witness(PHI, PSI, compose(PHI, PSI), 8, k=1)
    assert report.status == engine.UNEQUAL
    assert report.distinguishing == parse_word("y z^-1", 3)


def test_verify_accepts_k2_on_worked_pair():
    report = engine.verify_witness(PHI, PSI, compose(PHI, power(PSI, 2)), 8, k=2)
    assert report.status == engine.EQUAL
    assert report.depths == [8, 10]


def test_escalate_records_failures():
    report = engine.escalate(PHI, PSI, 1, 8)
    assert report.k == 2
    assert [a.k for a in report.attempts] == [1, 2]
    assert report.attempts[0].distinguishing == parse_word("y z^-1", 3)


def test_same_automorphism_twice():
    phi = aut("x", "y x^-1")
    report = engine.escalate(phi, phi, 1, 8)
    assert report.status == engine.EQUAL and report.k == 1
    assert report.chi == power(phi, 2)


def test_monotone_containment_on_samples():
    rng = random.Random(8)
    for _ in range(10):
        a, b = random_upg_pair(rng, 2)
        for k in (1, 2, 3):
            engine.check_monotone(compose(a.phi, power(b.phi, k)), a.phi, b.phi, 6)


def test_extend_by_inversion():
    chi = engine.extend_by_inversion(Automorphism.identity(1), 2)
    assert chi == aut("x", "y^-1")
    assert fixed_subgroup_oracle(chi, 8).generators == (parse_word("x", 2),)
    same = aut("x", "y x")
    assert engine.extend_by_inversion(same, 2) == same


def test_dispatch_rank0():
    phi = aut("x^-1", "z", "y")
    psi = aut("y", "x", "z^-1")
    report = engine.rank3_witness_search(phi, psi, 6)
    assert report.case == "rank 0" and report.status == engine.EQUAL
    assert fixed_subgroup_oracle(report.chi, 8).rank == 0


def test_dispatch_rank1_is_inner_by_root():
    g = parse_word("x y", 3)
    phi = inner(g ** 2)
    psi = inner(g ** 3)
    report = engine.rank3_witness_search(phi, psi, 8)
    assert report.case == "rank 1" and report.status == engine.EQUAL
    assert report.chi == inner(g)


def test_dispatch_upg():
    report = engine.rank3_witness_search(PHI, PSI, 8)
    assert report.status == engine.EQUAL and report.k == 2
    assert report.exact is True
    expected = stallings.fold([parse_word(t, 3) for t in ("x", "y x y^-1", "z x z^-1")])
    assert stallings.equal_subgroups(stallings.fold(report.intersection, 3), expected)


def test_dispatch_exponential_is_out_of_scope():
    # y -> y z, z -> z y z grows exponentially and fixes the commutator of y and z
    phi = aut("x", "y z", "z y z")
    report = engine.rank3_witness_search(phi, phi, 8)
    assert report.status == engine.OUT_OF_SCOPE
    assert report.chi is None
    assert len(report.intersection) == 2


def test_rank3_only():
    with pytest.raises(ValueError):
        engine.rank3_witness_search(aut("x", "y"), aut("x", "y"))


def test_report_text_is_parseable():
    report = engine.rank3_witness_search(PHI, PSI, 8)
    text = report.to_text()
    for line in text.splitlines():
        if line.strip().startswith("basis:"):
            w = parse_word(line.split(":", 1)[1], 3)
            assert isinstance(w, Word)
    assert text.endswith("verdict: equal\n")


def test_free_factor_route_inverts_the_free_petal():
    # z -> z x and z -> z y: every product of the two fixes some z w z^-1,
    # so the witness has to come from the factor <x, y>
    G = rose(3)
    f, g = UpperTriangularMap(G, [(), (), (1,)]), UpperTriangularMap(G, [(), (), (2,)])
    norm = normalize(f, g, 8)
    assert engine.invariant_free_factor(norm) == [1, 2]
    report = engine.witness_search(marked_automorphism(f), marked_automorphism(g), 8, norm)
    assert report.status == engine.EQUAL and report.case == "rank 2, inside a free factor"
    assert report.chi == aut("x", "y", "z^-1")


def test_free_factor_route_needs_an_invariant_sub_rose():
    G = rose(3)
    # E2 depends on E1 only, so dropping E1 would not leave an invariant sub-rose
    f = UpperTriangularMap(G, [(), (1,), ()])
    norm = normalize(f, f, 8)
    fake = type(norm)(norm.graph, norm.f, norm.g, (NielsenData(1, "none"),) + norm.data[1:])
    assert engine.invariant_free_factor(fake) is None
