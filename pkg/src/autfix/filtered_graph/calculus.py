"""Height, basic decompositions, G-reduced paths."""

from __future__ import annotations

from itertools import count
from typing import Sequence

from .. import stallings
from ..free_group import _join, invert_letters, reduce_letters
from .graph import FilteredGraph, Path, height, is_reduced
from .maps import UpperTriangularMap


class SearchBoundExhausted(RuntimeError):
    """A bounded search ran out of candidates; the message names the bound."""


def basic_decomposition(path: Sequence[int]) -> list[Path]:
    """Minimal decomposition into basic paths of height r = ht(path) and lower paths.

    Every E_r opens a piece that runs up to the next height r edge and swallows
    it when that edge is E_r^-1; an E_r^-1 not preceded by an open E_r closes a
    piece together with the lower segment before it.  This decomposition is a
    splitting for every upper triangular map on the graph.
    """
    path = tuple(path)
    if not path:
        raise ValueError("the trivial path has no decomposition")
    if not is_reduced(path):
        raise ValueError("path is not reduced")
    r = height(path)
    pieces: list[Path] = []
    current: list[int] = []
    for e in path:
        if e == r:
            if current:
                pieces.append(tuple(current))
            current = [e]
        elif e == -r:
            current.append(e)
            pieces.append(tuple(current))
            current = []
        else:
            current.append(e)
    if current:
        pieces.append(tuple(current))
    return pieces


def is_basic(path: Sequence[int], r: int | None = None) -> bool:
    """E_r gamma, gamma E_r^-1 or E_r gamma E_r^-1 with ht(gamma) < r."""
    path = tuple(path)
    if not path:
        return False
    r = height(path) if r is None else r
    body = path[1:] if path[0] == r else path
    if body and body[-1] == -r:
        body = body[:-1]
    elif path[0] != r:
        return False
    return height(body) < r


def is_splitting(f: UpperTriangularMap, pieces: Sequence[Path], iterations: int = 1) -> bool:
    """Check f^k(path)_# equals the concatenation of the f^k(piece)_# for k <= iterations."""
    whole = reduce_letters(e for piece in pieces for e in piece)
    images = [tuple(p) for p in pieces]
    for _ in range(iterations):
        whole = f.image_of(whole)
        images = [f.image_of(p) for p in images]
        if whole != tuple(e for img in images for e in img):
            return False
    return True


def is_cyclically_reduced(path: Sequence[int]) -> bool:
    path = tuple(path)
    return is_reduced(path) and (len(path) < 2 or path[0] != -path[-1])


def is_G_reduced(path: Sequence[int]) -> bool:
    """Cyclically reduced, nontrivial, and starting with E_r or ending with E_r^-1."""
    path = tuple(path)
    if not path or not is_cyclically_reduced(path):
        return False
    r = height(path)
    return path[0] == r or path[-1] == -r


def make_G_reduced(graph: FilteredGraph, loop: Sequence[int]) -> tuple[Path, Path]:
    """Return (delta, beta) with beta = (delta^-1 loop delta)_# G-reduced.

    ``delta`` starts at the basepoint of ``loop`` and has height at most
    ``ht(loop)``.
    """
    loop = reduce_letters(loop)
    if not loop:
        raise ValueError("the trivial loop has no G-reduced conjugate")
    graph.check_path(loop)
    if not graph.is_loop(loop):
        raise ValueError("path is not a loop")
    if is_G_reduced(loop):
        return (), loop
    i = 0
    while loop[i] == -loop[-1 - i]:
        i += 1
    sigma, core = loop[:i], loop[i : len(loop) - i]
    r = height(core)
    if r in core:
        j = core.index(r)
        return reduce_letters(sigma + core[:j]), core[j:] + core[:j]
    j = core.index(-r)
    return reduce_letters(sigma + core[: j + 1]), core[j + 1 :] + core[: j + 1]


def stays_G_reduced_check(f: UpperTriangularMap, path: Sequence[int]) -> bool:
    if not is_G_reduced(path):
        raise ValueError("input path is not G-reduced")
    return is_G_reduced(f.image_of(tuple(path)))


def loops_generate_rank(graph: FilteredGraph, loops: Sequence[Sequence[int]], base: int | None = None) -> int:
    """Rank of the subgroup of pi_1(G, base) generated by the given loops."""
    base = graph.base if base is None else base
    # move loops to the marking basepoint along the spanning tree
    t = graph.tree_path(base)
    words = [graph.tree_word(reduce_letters(t + tuple(l) + invert_letters(t))) for l in loops]
    return stallings.rank(stallings.fold(words, graph.rank))


def _path_power(path: Path, k: int) -> Path:
    out: Path = ()
    step = path if k >= 0 else invert_letters(path)
    for _ in range(abs(k)):
        out = _join(out, step)
    return out


def find_pq(graph: FilteredGraph, alpha: Sequence[int], beta: Sequence[int], bound: int, method: str = "recipe") -> tuple[int, int]:
    """Positive p, q <= bound with (alpha^p beta alpha^q)_# G-reduced.

    ``method="recipe"`` tries p = |beta| + 1, q = |alpha^(p+1) beta| + 1 first
    and scans on failure; ``method="scan"`` scans pairs by increasing p + q.
    """
    alpha, beta = reduce_letters(alpha), reduce_letters(beta)
    if not is_G_reduced(alpha):
        raise ValueError("alpha must be G-reduced")
    if not beta or not graph.is_loop(alpha) or not graph.is_loop(beta):
        raise ValueError("alpha and beta must be nontrivial loops")
    if graph.start(alpha) != graph.start(beta):
        raise ValueError("alpha and beta must share a basepoint")
    if height(alpha) != height(beta):
        raise ValueError("alpha and beta must have the same height")
    if loops_generate_rank(graph, [alpha, beta], graph.start(alpha)) != 2:
        raise ValueError("alpha and beta do not generate a free group of rank 2")

    def works(p, q):
        return is_G_reduced(reduce_letters(_path_power(alpha, p) + beta + _path_power(alpha, q)))

    if method == "recipe":
        p = len(beta) + 1
        q = len(reduce_letters(_path_power(alpha, p + 1) + beta)) + 1
        if p <= bound and q <= bound and works(p, q):
            return p, q
    elif method != "scan":
        raise ValueError(f"unknown method {method!r}")
    for total in count(2):
        if total > 2 * bound:
            break
        for p in range(max(1, total - bound), min(bound, total - 1) + 1):
            if works(p, total - p):
                return p, total - p
    raise SearchBoundExhausted(f"no (p, q) with p, q <= {bound}; the preconditions look violated")
