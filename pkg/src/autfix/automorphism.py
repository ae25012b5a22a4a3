"""Automorphisms of F_n given by the images of the basis letters.

Composition convention: ``compose(phi, psi)`` is "psi first, then phi", so
``compose(phi, power(psi, k))`` is the automorphism written phi psi^k.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import stallings
from .free_group import (
    RankMismatch,
    Word,
    _join,
    default_names,
    format_word,
    invert_letters,
    letter_key,
    letters_in_order,
    reduce_letters,
    words_up_to,
)


class InverseMismatch(ValueError):
    """Raised when supplied inverse images do not invert the images."""


def _substitute(images: dict[int, tuple[int, ...]], letters: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        for b in images[a]:
            if out and out[-1] == -b:
                out.pop()
            else:
                out.append(b)
    return tuple(out)


def _signed_table(images: Sequence[tuple[int, ...]]) -> dict[int, tuple[int, ...]]:
    table = {}
    for i, img in enumerate(images, start=1):
        table[i] = img
        table[-i] = invert_letters(img)
    return table


class Automorphism:
    """Endomorphism of F_n fixed by basis images, assumed invertible.

    Nothing checks invertibility of bare images.  Passing ``inverse_images``
    makes the constructor verify both composites on every basis letter.
    """

    __slots__ = ("rank", "images", "inverse_images", "_table")

    def __init__(self, images: Sequence[Word], inverse_images: Sequence[Word] | None = None):
        images = tuple(images)
        if not images:
            raise ValueError("an automorphism needs at least one basis image")
        self.rank = len(images)
        for w in images:
            if w.rank != self.rank:
                raise RankMismatch(f"image of rank {w.rank} for a rank {self.rank} automorphism")
        self.images = images
        self._table = _signed_table([w.letters for w in images])
        self.inverse_images = None
        if inverse_images is not None:
            inverse_images = tuple(inverse_images)
            if len(inverse_images) != self.rank or any(w.rank != self.rank for w in inverse_images):
                raise RankMismatch("inverse images do not match the rank")
            inv = _signed_table([w.letters for w in inverse_images])
            for i in range(1, self.rank + 1):
                if _substitute(self._table, inv[i]) != (i,) or _substitute(inv, self._table[i]) != (i,):
                    raise InverseMismatch(f"inverse images fail on basis letter {i}")
            self.inverse_images = inverse_images

    @classmethod
    def identity(cls, rank: int) -> "Automorphism":
        gens = [Word.generator(i, rank) for i in range(1, rank + 1)]
        return cls(gens, gens)

    @classmethod
    def from_letters(cls, images: Sequence[Sequence[int]], inverse: Sequence[Sequence[int]] | None = None):
        rank = len(images)
        imgs = [Word(reduce_letters(w), rank) for w in images]
        inv = None if inverse is None else [Word(reduce_letters(w), rank) for w in inverse]
        return cls(imgs, inv)

    @property
    def has_inverse(self) -> bool:
        return self.inverse_images is not None

    def image_letters(self, a: int) -> tuple[int, ...]:
        return self._table[a]

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Automorphism({format_automorphism(self, inline=True)})"

    def inverse(self) -> "Automorphism":
        if self.inverse_images is None:
            raise ValueError("no verified inverse is attached to this automorphism")
        return Automorphism(self.inverse_images, self.images)

    def max_image_length(self) -> int:
        return max(len(w) for w in self.images)


def apply(phi: Automorphism, w: Word) -> Word:
    if w.rank != phi.rank:
        raise RankMismatch(f"rank {w.rank} word given to a rank {phi.rank} automorphism")
    return Word(_substitute(phi._table, w.letters), w.rank)


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """The automorphism w -> phi(psi(w))."""
    if phi.rank != psi.rank:
        raise RankMismatch(f"cannot compose rank {phi.rank} with rank {psi.rank}")
    images = [apply(phi, w) for w in psi.images]
    inverse = None
    if phi.inverse_images is not None and psi.inverse_images is not None:
        inverse = [apply(psi.inverse(), w) for w in phi.inverse_images]
    return Automorphism(images, inverse)


def power(phi: Automorphism, k: int) -> Automorphism:
    if k < 0:
        return power(phi.inverse(), -k)
    result = Automorphism.identity(phi.rank)
    base = phi
    while k:
        if k & 1:
            result = compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def inner(g: Word) -> Automorphism:
    """Conjugation w -> g^-1 w g."""
    n = g.rank
    gens = [Word.generator(i, n) for i in range(1, n + 1)]
    return Automorphism([~g * x * g for x in gens], [g * x * ~g for x in gens])


def extend(chi: Automorphism, rank: int) -> Automorphism:
    """Embed an automorphism of <x_1..x_r> into F_rank, inverting the remaining letters."""
    r = chi.rank
    if r > rank:
        raise ValueError("cannot restrict to a smaller rank")

    def lift(w: Word) -> Word:
        return Word(w.letters, rank)

    tail = [Word((-j,), rank) for j in range(r + 1, rank + 1)]
    images = [lift(w) for w in chi.images] + tail
    inverse = None
    if chi.inverse_images is not None:
        inverse = [lift(w) for w in chi.inverse_images] + tail
    return Automorphism(images, inverse)


# ---------------------------------------------------------------------------
# abelianization


def abelianization(phi: Automorphism) -> np.ndarray:
    """Integer matrix of the induced map on Z^n; column j holds the exponents of phi(x_j)."""
    n = phi.rank
    M = np.zeros((n, n), dtype=object)
    for j, w in enumerate(phi.images):
        for a in w.letters:
            M[abs(a) - 1, j] += 1 if a > 0 else -1
    return M


def is_unipotent(M: np.ndarray) -> bool:
    """True iff (Id - M)^n vanishes."""
    n = M.shape[0]
    N = np.identity(n, dtype=object) - M
    P = np.identity(n, dtype=object)
    for _ in range(n):
        P = P.dot(N)
    return not np.any(P != 0)


# ---------------------------------------------------------------------------
# fixed word oracle


def _differences(phi: Automorphism, length: int, left: bool) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    """Bucket reduced words of the given length by p^-1 phi(p) (left) or s phi(s)^-1 (right)."""
    buckets: dict[tuple[int, ...], list[tuple[int, ...]]] = defaultdict(list)
    table = phi._table
    for w in words_up_to(phi.rank, length, length):
        img = _substitute(table, w.letters)
        if left:
            key = _join(invert_letters(w.letters), img)
        else:
            key = _join(w.letters, invert_letters(img))
        buckets[key].append(w.letters)
    return buckets


def _fixed_letters(phi: Automorphism, m: int, cache: dict) -> list[tuple[int, ...]]:
    """Fixed reduced words of length exactly m, as letter tuples in no particular order.

    A word p s is fixed exactly when p^-1 phi(p) == s phi(s)^-1, so words are
    assembled from half-length pieces matched on that difference.
    """

    def buckets(length, left):
        key = (length, left)
        if key not in cache:
            cache[key] = _differences(phi, length, left)
        return cache[key]

    h1, h2 = (m + 1) // 2, m // 2
    left, right = buckets(h1, True), buckets(h2, False)
    found = []
    for key, prefixes in left.items():
        suffixes = right.get(key)
        if not suffixes:
            continue
        for p in prefixes:
            for s in suffixes:
                if s and p[-1] == -s[0]:
                    continue
                found.append(p + s)
    return found


def iter_fixed_words(phi: Automorphism, max_length: int, min_length: int = 1) -> Iterator[Word]:
    """Fixed reduced words with min_length <= |w| <= max_length, length-lex order."""
    cache: dict = {}
    order = {a: letter_key(a) for a in letters_in_order(phi.rank)}
    for m in range(max(min_length, 1), max_length + 1):
        found = _fixed_letters(phi, m, cache)
        found.sort(key=lambda w: tuple(map(order.__getitem__, w)))
        for letters in found:
            yield Word.trusted(letters, phi.rank)


def fixed_words_up_to(phi: Automorphism, L: int) -> list[Word]:
    """Every nontrivial reduced word of length at most L fixed by phi."""
    if L < 1:
        raise ValueError("search depth must be at least 1")
    return list(iter_fixed_words(phi, L))


@dataclass(frozen=True)
class FixedSubgroupReport:
    generators: tuple[Word, ...]
    rank: int
    search_depth: int
    graph: stallings.SubgroupGraph
    saturated: bool = field(default=False)

    def contains(self, w: Word) -> bool:
        return stallings.member(self.graph, w)


def _fold_words(words: Iterable[Word], rank: int, snapshot: int | None = None):
    """Fold words given in length order; also return the graph after length ``snapshot``."""
    # only words outside the current subgroup are added, which keeps refolds rare
    gens: list[Word] = []
    graph = stallings.trivial_subgroup(rank)
    for w in words:
        if stallings.member_letters(graph, w.letters):
            continue
        gens.append(w)
        graph = stallings.fold(gens, rank)
    # generators arrive in length order, so the short ones generate the short words
    early = None
    if snapshot is not None:
        early = stallings.fold([w for w in gens if len(w) <= snapshot], rank)
    return graph, early


@lru_cache(maxsize=128)
def fixed_subgroup_oracle(phi: Automorphism, L: int) -> FixedSubgroupReport:
    """Lower approximation of Fix phi from the fixed words of length at most L.

    ``saturated`` records that words of length <= L - 2 already give the same
    subgroup; it is a heuristic flag, not a proof of exactness.  Reports are
    cached per automorphism and depth.
    """
    if L < 1:
        raise ValueError("search depth must be at least 1")
    graph, shorter = _fold_words(iter_fixed_words(phi, L), phi.rank, snapshot=L - 2)
    gens = tuple(stallings.basis(graph))
    return FixedSubgroupReport(gens, stallings.rank(graph), L, graph, saturated=shorter == graph)


def fixed_words_brute_force(phi: Automorphism, L: int) -> list[Word]:
    """Apply phi to every reduced word of length 1..L; slow reference route."""
    return [w for w in words_up_to(phi.rank, L, 1) if apply(phi, w) == w]


def _maximal_exponents(k_max: int) -> list[int]:
    # Fix phi^d sits inside Fix phi^k when d divides k
    return [k for k in range(2, k_max + 1) if not any(j % k == 0 for j in range(k + 1, k_max + 1))]


def periodic_implies_fixed_check(phi: Automorphism, k_max: int, L: int) -> list[Word]:
    """Words of length <= L fixed by some phi^k (k <= k_max) but not by phi.

    An empty list is what a UPG automorphism must produce.
    """
    cache: dict = {}
    fixed = {t for m in range(1, L + 1) for t in _fixed_letters(phi, m, cache)}
    violations = set()
    for k in _maximal_exponents(k_max):
        phik = power(phi, k)
        cache_k: dict = {}
        for m in range(1, L + 1):
            violations.update(t for t in _fixed_letters(phik, m, cache_k) if t not in fixed)
    return sorted((Word(t, phi.rank) for t in violations), key=Word.sort_key)


# ---------------------------------------------------------------------------
# text format


def format_automorphism(phi: Automorphism, names: Sequence[str] | None = None, inline: bool = False) -> str:
    names = names or default_names(phi.rank)
    lines = [f"{names[i]} -> {format_word(w, names)}" for i, w in enumerate(phi.images)]
    if inline:
        return ", ".join(lines)
    if phi.inverse_images is not None:
        lines.append("inverse:")
        lines.extend(f"{names[i]} -> {format_word(w, names)}" for i, w in enumerate(phi.inverse_images))
    return "\n".join(lines)
