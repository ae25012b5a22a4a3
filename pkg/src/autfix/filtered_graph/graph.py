"""Filtered graphs, edge paths and markings.

Edges are numbered by height: edge ``i`` is E_i and the filtration G_r is
spanned by E_1..E_r.  A path is a tuple of nonzero ints, ``i`` for E_i
traversed forwards and ``-i`` for its reverse.  The trivial path is ``()``;
whenever its vertex matters the caller passes it separately.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from ..automorphism import Automorphism, apply
from ..free_group import Word, invert_letters, reduce_letters

Path = tuple[int, ...]


class IncidenceError(ValueError):
    """A sequence of edges that does not form a path."""


class FilteredGraph:
    """Graph with edges E_1..E_m in filtration order and a marking at ``base``.

    The marking is a spanning ``tree`` together with an automorphism
    ``marking`` that sends the free basis of F_rank to words in the non-tree
    edges (in height order).  The default marking is the identity, which on a
    rose identifies petal E_i with x_i.
    """

    __slots__ = ("vertices", "ends", "base", "tree", "marking", "_tree_paths", "_free_index", "_free_edges")

    def __init__(
        self,
        vertices: Sequence[str],
        ends: Sequence[tuple[int, int]],
        base: int = 0,
        tree: Iterable[int] | None = None,
        marking: Automorphism | None = None,
    ):
        self.vertices = tuple(vertices)
        self.ends = tuple((int(o), int(t)) for o, t in ends)
        if not self.ends:
            raise ValueError("a filtered graph needs at least one edge")
        nv = len(self.vertices)
        for i, (o, t) in enumerate(self.ends, start=1):
            if not (0 <= o < nv and 0 <= t < nv):
                raise ValueError(f"edge E{i} has an endpoint outside the vertex list")
        touched = {v for e in self.ends for v in e}
        missing = [self.vertices[v] for v in range(nv) if v not in touched]
        if missing:
            raise ValueError(f"vertices {missing} lie on no edge of the filtration")
        if not 0 <= base < nv:
            raise ValueError("base vertex outside the vertex list")
        self.base = base
        self.tree = frozenset(default_tree(nv, self.ends) if tree is None else tree)
        self._check_tree()
        self._free_edges = tuple(i for i in range(1, len(self.ends) + 1) if i not in self.tree)
        self._free_index = {e: k for k, e in enumerate(self._free_edges, start=1)}
        self._tree_paths = self._compute_tree_paths()
        if marking is None:
            marking = Automorphism.identity(self.rank)
        if marking.rank != self.rank:
            raise ValueError(f"marking of rank {marking.rank} on a graph of rank {self.rank}")
        if marking.inverse_images is None:
            raise ValueError("the marking must carry a verified inverse")
        self.marking = marking

    # -- structure -------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.ends)

    @property
    def rank(self) -> int:
        return len(self.ends) - len(self.vertices) + 1

    @property
    def free_edges(self) -> tuple[int, ...]:
        return self._free_edges

    def edge_name(self, e: int) -> str:
        return f"E{abs(e)}" + ("^-1" if e < 0 else "")

    def origin(self, e: int) -> int:
        o, t = self.ends[abs(e) - 1]
        return o if e > 0 else t

    def terminus(self, e: int) -> int:
        o, t = self.ends[abs(e) - 1]
        return t if e > 0 else o

    def outgoing(self, v: int, max_height: int | None = None) -> list[int]:
        """Signed edges leaving v, ordered E1, E1^-1, E2, ..."""
        top = self.n_edges if max_height is None else max_height
        out = []
        for i in range(1, top + 1):
            o, t = self.ends[i - 1]
            if o == v:
                out.append(i)
            if t == v:
                out.append(-i)
        return out

    def _check_tree(self):
        nv = len(self.vertices)
        if len(self.tree) != nv - 1:
            raise ValueError(f"spanning tree needs {nv - 1} edges, got {len(self.tree)}")
        parent = list(range(nv))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for i in self.tree:
            if not 1 <= i <= self.n_edges:
                raise ValueError(f"tree edge E{i} does not exist")
            a, b = find(self.ends[i - 1][0]), find(self.ends[i - 1][1])
            if a == b:
                raise ValueError(f"tree edges contain a cycle at E{i}")
            parent[a] = b

    def _compute_tree_paths(self) -> list[Path]:
        paths: list[Path | None] = [None] * len(self.vertices)
        paths[self.base] = ()
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for e in self.outgoing(v):
                if abs(e) in self.tree:
                    w = self.terminus(e)
                    if paths[w] is None:
                        paths[w] = paths[v] + (e,)
                        queue.append(w)
        return paths  # type: ignore[return-value]

    def tree_path(self, v: int) -> Path:
        """Path in the spanning tree from the base vertex to v."""
        return self._tree_paths[v]

    def __repr__(self):
        return f"FilteredGraph(vertices={len(self.vertices)}, edges={self.n_edges}, rank={self.rank})"

    def with_ends(self, ends: Sequence[tuple[int, int]], tree=None, marking=None) -> "FilteredGraph":
        return FilteredGraph(self.vertices, ends, self.base, tree, marking)

    # -- paths -----------------------------------------------------------

    def check_path(self, path: Sequence[int], start: int | None = None) -> None:
        for e in path:
            if e == 0 or abs(e) > self.n_edges:
                raise IncidenceError(f"no edge {e}")
        if path and start is not None and self.origin(path[0]) != start:
            raise IncidenceError(f"path does not start at {self.vertices[start]}")
        for a, b in zip(path, path[1:]):
            if self.terminus(a) != self.origin(b):
                raise IncidenceError(f"{self.edge_name(a)} is not followed by {self.edge_name(b)}")

    def is_path(self, path: Sequence[int]) -> bool:
        try:
            self.check_path(path)
        except IncidenceError:
            return False
        return True

    def start(self, path: Sequence[int], default: int | None = None) -> int | None:
        return self.origin(path[0]) if path else default

    def end(self, path: Sequence[int], default: int | None = None) -> int | None:
        return self.terminus(path[-1]) if path else default

    def is_loop(self, path: Sequence[int], at: int | None = None) -> bool:
        if not path:
            return True
        s, t = self.start(path), self.end(path)
        return s == t and (at is None or s == at)

    # -- marking ---------------------------------------------------------

    def tree_word(self, loop: Sequence[int]) -> Word:
        """Read a loop at the base vertex as a word in the non-tree edges."""
        letters = []
        for e in loop:
            k = self._free_index.get(abs(e))
            if k is not None:
                letters.append(k if e > 0 else -k)
        return Word(reduce_letters(letters), self.rank)

    def tree_loop(self, w: Word) -> Path:
        """Reduced loop at the base vertex spelling a word in the non-tree edges."""
        out: list[int] = []
        for a in w.letters:
            e = self._free_edges[abs(a) - 1] * (1 if a > 0 else -1)
            out.extend(self.tree_path(self.origin(e)))
            out.append(e)
            out.extend(invert_letters(self.tree_path(self.terminus(e))))
        return reduce_letters(out)

    def loop_to_word(self, loop: Sequence[int]) -> Word:
        """Element of F_rank represented by a loop at the base vertex."""
        if loop and not self.is_loop(loop, self.base):
            raise IncidenceError("not a loop at the base vertex")
        return apply(self.marking.inverse(), self.tree_word(loop))

    def word_to_loop(self, w: Word) -> Path:
        return self.tree_loop(apply(self.marking, w))


def default_tree(n_vertices: int, ends: Sequence[tuple[int, int]]) -> list[int]:
    """Spanning tree taking the lowest edges first."""
    parent = list(range(n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for i, (o, t) in enumerate(ends, start=1):
        a, b = find(o), find(t)
        if a != b:
            parent[a] = b
            tree.append(i)
    if len(tree) != n_vertices - 1:
        raise ValueError("graph is not connected")
    return tree


def rose(n: int) -> FilteredGraph:
    """One vertex, n petals; the marking identifies E_i with x_i."""
    return FilteredGraph(["v0"], [(0, 0)] * n)


def reduce_path(path: Iterable[int]) -> Path:
    return reduce_letters(path)


def invert_path(path: Sequence[int]) -> Path:
    return invert_letters(path)


def height(path: Sequence[int]) -> int:
    """Largest filtration index crossed; 0 for the trivial path."""
    return max((abs(e) for e in path), default=0)


def is_reduced(path: Sequence[int]) -> bool:
    return all(a != -b for a, b in zip(path, path[1:]))


def format_path(path: Sequence[int]) -> str:
    if not path:
        return "1"
    return " ".join(f"E{abs(e)}" + ("^-1" if e < 0 else "") for e in path)
