"""Reduced words in a free group of finite rank.

A letter is a nonzero int: ``i`` stands for the basis element x_i and
``-i`` for its inverse, so sign and index live in one value.  A word is an
immutable tuple of letters wrapped in :class:`Word`, which also carries the
rank of the ambient free group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class RankMismatch(ValueError):
    """Raised when objects living in free groups of different rank meet."""


class WordSyntaxError(ValueError):
    """Raised when a textual word cannot be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + message)


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a sequence of signed letters (stack based, one pass)."""
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def letter_key(a: int) -> tuple[int, int]:
    # x < x^-1 < y < y^-1 < ...
    return (abs(a), 1 if a < 0 else 0)


def letters_in_order(rank: int) -> list[int]:
    return [s * i for i in range(1, rank + 1) for s in (1, -1)]


@dataclass(frozen=True, order=False)
class Word:
    """A freely reduced word of a free group of the given rank.

    Build words with :func:`reduce`, :func:`parse_word` or :meth:`generator`;
    the constructor trusts its input apart from a cheap validity check.
    """

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        for a in self.letters:
            if a == 0 or abs(a) > self.rank:
                raise ValueError(f"letter {a} outside rank {self.rank}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("word is not freely reduced")

    @classmethod
    def trusted(cls, letters: tuple[int, ...], rank: int) -> "Word":
        """Wrap letters already known to be reduced and in range, skipping the checks."""
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "rank", rank)
        return w

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int) -> "Word":
        return cls((i,), rank)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def _check(self, other: "Word"):
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} word combined with rank {other.rank} word")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(_join(self.letters, other.letters), self.rank)

    def __invert__(self) -> "Word":
        return Word(invert_letters(self.letters), self.rank)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else ~self
        out = Word.identity(self.rank)
        for _ in range(abs(k)):
            out = out * base
        return out

    def sort_key(self):
        """Length-lexicographic key over x < x^-1 < y < y^-1 < ..."""
        return (len(self.letters), [letter_key(a) for a in self.letters])

    def __lt__(self, other: "Word"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r}, rank={self.rank})"


def invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(letters))


def _join(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    # both inputs reduced: cancellation only happens at the seam
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return tuple(u[: len(u) - i]) + tuple(v[i:])


def reduce(raw: Iterable[int], rank: int) -> Word:
    """Free reduction of an arbitrary letter sequence."""
    return Word(reduce_letters(raw), rank)


def concat(u: Word, v: Word) -> Word:
    return u * v


def invert(w: Word) -> Word:
    return ~w


def conjugate(w: Word, g: Word) -> Word:
    """Return g^-1 w g."""
    return ~g * w * g


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with a cyclically reduced core."""
    c, core = cyclic_split(w.letters)
    return Word(core, w.rank), Word(c, w.rank)


def cyclic_split(letters: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(conjugator, core) with letters == conjugator + core + conjugator^-1, core cyclically reduced."""
    a = tuple(letters)
    i, j = 0, len(a) - 1
    while i < j and a[i] == -a[j]:
        i += 1
        j -= 1
    return a[:i], a[i : j + 1]


def root_letters(letters: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Primitive root of a nontrivial reduced letter sequence."""
    c, core = cyclic_split(letters)
    m = len(core)
    for d in range(1, m + 1):
        if m % d == 0 and core == core[:d] * (m // d):
            return c + core[:d] + invert_letters(c), m // d
    raise ValueError("the identity has no primitive root")


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(root, e)`` with ``w == root**e`` and ``root`` not a proper power."""
    if not w:
        raise ValueError("the identity has no primitive root")
    root, e = root_letters(w.letters)
    return Word(root, w.rank), e


def words_up_to(rank: int, max_length: int, min_length: int = 0) -> Iterator[Word]:
    """All reduced words with ``min_length <= |w| <= max_length`` in length-lex order."""
    alphabet = letters_in_order(rank)
    level: list[tuple[int, ...]] = [()]
    for length in range(max_length + 1):
        if length >= min_length:
            for letters in level:
                yield Word(letters, rank)
        if length == max_length:
            break
        level = [w + (a,) for w in level for a in alphabet if not w or w[-1] != -a]


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"([A-Za-z]\d*)(\^-1|\^\(-1\))?")
_SEPARATORS = set(" \t*.·")


def default_names(rank: int) -> list[str]:
    if rank <= 3:
        return ["x", "y", "z"][:rank]
    return [f"a{i}" for i in range(1, rank + 1)]


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    """Render as space separated names with ``^-1`` for inverses; identity is ``1``."""
    if not w.letters:
        return "1"
    names = names or default_names(w.rank)
    return " ".join(names[abs(a) - 1] + ("^-1" if a < 0 else "") for a in w.letters)


def parse_letters(text: str, names: Sequence[str], line: int | None = None) -> list[int]:
    """Tokenize ``text`` into signed letters over the given basis names.

    Letters may be juxtaposed (``yxY``) or separated by whitespace, ``*``,
    ``.`` or ``·``.  A capitalised name is the inverse alias of its lower
    case form when the lower case form is a basis name.
    """
    index = {n: i + 1 for i, n in enumerate(names)}
    stripped = text.strip()
    if stripped in ("1", "e", ""):
        return []
    out: list[int] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch in _SEPARATORS:
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"unexpected character {ch!r}", line, pos + 1)
        name, inv = m.group(1), m.group(2)
        end = m.end()
        sign = -1 if inv else 1
        if name in index:
            out.append(sign * index[name])
        elif name.lower() in index and name != name.lower():
            out.append(-sign * index[name.lower()])
        else:
            raise WordSyntaxError(f"unknown letter {name!r}", line, pos + 1)
        pos = end
    return out


def parse_word(text: str, rank: int, names: Sequence[str] | None = None, line: int | None = None) -> Word:
    return reduce(parse_letters(text, names or default_names(rank), line), rank)
