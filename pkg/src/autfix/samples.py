"""Seeded random instances: words, subgroups, filtered graphs, upper triangular maps.

Every generator takes a ``random.Random`` so that test corpora are
reproducible.  Automorphisms come with a certificate: the filtered graph and
upper triangular map that induce them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .automorphism import Automorphism, compose
from .filtered_graph.graph import FilteredGraph, Path, rose
from .filtered_graph.maps import UpperTriangularMap, marked_automorphism
from .free_group import Word, invert_letters, reduce_letters


def random_word(rng: random.Random, rank: int, max_length: int, min_length: int = 0) -> Word:
    n = rng.randint(min_length, max_length)
    out: list[int] = []
    while len(out) < n:
        a = rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
        if out and out[-1] == -a:
            continue
        out.append(a)
    return Word(tuple(out), rank)


def random_subgroup(rng: random.Random, rank: int, n_gens: int = 3, max_length: int = 5) -> list[Word]:
    gens = [random_word(rng, rank, max_length, 1) for _ in range(rng.randint(1, n_gens))]
    return gens


def nielsen_move(rng: random.Random, rank: int) -> Automorphism:
    """A random elementary automorphism: x_i -> x_i x_j^e, x_i -> x_j^e x_i, or x_i -> x_i^-1."""
    gens = [(i,) for i in range(1, rank + 1)]
    i = rng.randrange(rank)
    if rank == 1 or rng.random() < 0.15:
        images = list(gens)
        images[i] = (-(i + 1),)
        return Automorphism.from_letters(images, images)
    j = rng.choice([k for k in range(rank) if k != i])
    e = rng.choice((1, -1)) * (j + 1)
    images, inverse = list(gens), list(gens)
    if rng.random() < 0.5:
        images[i] = (i + 1, e)
        inverse[i] = (i + 1, -e)
    else:
        images[i] = (e, i + 1)
        inverse[i] = (-e, i + 1)
    return Automorphism.from_letters(images, inverse)


def random_change_of_basis(rng: random.Random, rank: int, moves: int = 3) -> Automorphism:
    theta = Automorphism.identity(rank)
    for _ in range(moves):
        theta = compose(nielsen_move(rng, rank), theta)
    return theta


def _random_lower_word(rng: random.Random, i: int, max_length: int) -> tuple[int, ...]:
    if i == 1:
        return ()
    letters = [a for k in range(1, i) for a in (k, -k)]
    n = rng.randint(0, max_length)
    out: list[int] = []
    while len(out) < n:
        a = rng.choice(letters)
        if out and out[-1] == -a:
            continue
        out.append(a)
    return tuple(out)


def random_rose_map(rng: random.Random, graph: FilteredGraph, max_suffix: int = 3) -> UpperTriangularMap:
    return UpperTriangularMap(graph, [_random_lower_word(rng, i, max_suffix) for i in range(1, graph.n_edges + 1)])


@dataclass
class UPGSample:
    """An automorphism together with the upper triangular map that induces it."""

    phi: Automorphism
    f: UpperTriangularMap

    @property
    def graph(self) -> FilteredGraph:
        return self.f.graph


def random_upg(rng: random.Random, rank: int, max_suffix: int = 3, moves: int = 2) -> UPGSample:
    """Upper triangular map on a rose with a random marking, and its automorphism."""
    theta = random_change_of_basis(rng, rank, moves) if moves else Automorphism.identity(rank)
    G = FilteredGraph(["v0"], [(0, 0)] * rank, 0, (), theta)
    f = random_rose_map(rng, G, max_suffix)
    return UPGSample(marked_automorphism(f), f)


def random_upg_pair(rng: random.Random, rank: int, max_suffix: int = 3, moves: int = 2):
    """Two upper triangular maps on one marked rose, with their automorphisms."""
    a = random_upg(rng, rank, max_suffix, moves)
    g = random_rose_map(rng, a.graph, max_suffix)
    return a, UPGSample(marked_automorphism(g), g)


# ---------------------------------------------------------------------------
# general filtered graphs


def random_filtered_graph(rng: random.Random, n_vertices: int, n_edges: int) -> FilteredGraph:
    """Connected graph with the given sizes; the lowest edges form loops often enough to be useful."""
    if n_edges < n_vertices:
        raise ValueError("need at least as many edges as vertices for rank >= 1")
    while True:
        ends = []
        for _ in range(n_edges):
            o = rng.randrange(n_vertices)
            t = o if rng.random() < 0.3 else rng.randrange(n_vertices)
            ends.append((o, t))
        touched = {v for e in ends for v in e}
        if len(touched) < n_vertices:
            continue
        try:
            return FilteredGraph([f"v{i}" for i in range(n_vertices)], ends)
        except ValueError:
            continue


def _loop_generators(graph: FilteredGraph, top: int, v: int) -> list[Path]:
    """Free generators of loops at v inside G_top (empty when v is not on G_top)."""
    adj: dict[int, list[int]] = {}
    for i in range(1, top + 1):
        o, t = graph.ends[i - 1]
        adj.setdefault(o, []).append(i)
        adj.setdefault(t, []).append(-i)
    if v not in adj:
        return []
    parent: dict[int, Path] = {v: ()}
    order = [v]
    tree = set()
    for x in order:
        for e in adj[x]:
            w = graph.terminus(e)
            if w not in parent:
                parent[w] = parent[x] + (e,)
                tree.add(abs(e))
                order.append(w)
    gens = []
    for i in range(1, top + 1):
        if i in tree:
            continue
        o, t = graph.ends[i - 1]
        if o in parent:
            gens.append(reduce_letters(parent[o] + (i,) + invert_letters(parent[t])))
    return gens


def random_loop(rng: random.Random, graph: FilteredGraph, top: int, v: int, max_factors: int = 2) -> Path:
    gens = _loop_generators(graph, top, v)
    if not gens:
        return ()
    out: Path = ()
    for _ in range(rng.randint(0, max_factors)):
        g = rng.choice(gens)
        out = reduce_letters(out + (g if rng.random() < 0.5 else invert_letters(g)))
    return out


def random_upper_triangular(rng: random.Random, graph: FilteredGraph, max_factors: int = 2) -> UpperTriangularMap:
    suffixes = [random_loop(rng, graph, i - 1, graph.terminus(i), max_factors) for i in range(1, graph.n_edges + 1)]
    return UpperTriangularMap(graph, suffixes)


def random_path(rng: random.Random, graph: FilteredGraph, length: int, start: int | None = None) -> Path:
    """Random reduced edge path; it may stop early at a vertex of valence one."""
    v = rng.randrange(len(graph.vertices)) if start is None else start
    out: list[int] = []
    for _ in range(length):
        moves = [e for e in graph.outgoing(v) if not out or e != -out[-1]]
        if not moves:
            break
        e = rng.choice(moves)
        out.append(e)
        v = graph.terminus(e)
    return tuple(out)


def sample_graphs(rng: random.Random, count: int) -> list[FilteredGraph]:
    """A mixed set: roses, theta-like graphs and random graphs on up to three vertices."""
    graphs: list[FilteredGraph] = []
    for k in range(count):
        kind = k % 3
        if kind == 0:
            graphs.append(rose(rng.randint(2, 4)))
        else:
            nv = rng.randint(2, 3)
            graphs.append(random_filtered_graph(rng, nv, nv + rng.randint(1, 3)))
    return graphs


def standard_basis(rank: int) -> Sequence[Word]:
    return [Word.generator(i, rank) for i in range(1, rank + 1)]
