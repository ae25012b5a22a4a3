"""Upper triangular maps f(E_i) = E_i u_i on a filtered graph."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..automorphism import Automorphism, compose, inner
from ..free_group import Word, _join, invert_letters, reduce_letters
from .graph import FilteredGraph, IncidenceError, Path, format_path, height, is_reduced


class NotUpperTriangular(ValueError):
    """Edge images that violate f(E_i) = E_i u_i with u_i a loop in G_{i-1}."""


class UpperTriangularMap:
    """Map fixing every vertex with f(E_i) = E_i u_i, u_i a reduced loop of height < i."""

    __slots__ = ("graph", "suffixes", "_images")

    def __init__(self, graph: FilteredGraph, suffixes: Sequence[Sequence[int]]):
        if len(suffixes) != graph.n_edges:
            raise NotUpperTriangular(f"expected {graph.n_edges} suffixes, got {len(suffixes)}")
        self.graph = graph
        self.suffixes: tuple[Path, ...] = tuple(tuple(u) for u in suffixes)
        for i, u in enumerate(self.suffixes, start=1):
            if not is_reduced(u):
                raise NotUpperTriangular(f"suffix of E{i} is not reduced")
            if height(u) >= i:
                raise NotUpperTriangular(f"suffix of E{i} has height {height(u)}, must be below {i}")
            try:
                graph.check_path(u, start=graph.terminus(i))
            except IncidenceError as exc:
                raise NotUpperTriangular(f"suffix of E{i} is not a path from the end of E{i}: {exc}") from None
            if u and graph.end(u) != graph.terminus(i):
                raise NotUpperTriangular(f"suffix of E{i} is not a loop, so the vertex it ends at would move")
        images = {}
        for i, u in enumerate(self.suffixes, start=1):
            images[i] = (i,) + u
            images[-i] = invert_letters(u) + (-i,)
        self._images = images

    @classmethod
    def identity(cls, graph: FilteredGraph) -> "UpperTriangularMap":
        return cls(graph, [()] * graph.n_edges)

    @classmethod
    def from_images(cls, graph: FilteredGraph, images: Mapping[int, Sequence[int]]) -> "UpperTriangularMap":
        """Build from full edge images; unlisted edges are fixed.

        Each image must start with its own edge.  Images with a nontrivial
        prefix have to be brought to this form by subdividing first.
        """
        suffixes = []
        for i in range(1, graph.n_edges + 1):
            img = tuple(images.get(i, (i,)))
            if not img or img[0] != i:
                raise NotUpperTriangular(
                    f"image of E{i} is {format_path(img)} but must begin with E{i}; "
                    f"subdivide E{i} so that its image has a trivial prefix"
                )
            suffixes.append(reduce_letters(img[1:]))
        return cls(graph, suffixes)

    def image(self, e: int) -> Path:
        return self._images[e]

    def __call__(self, path: Sequence[int]) -> Path:
        return self.image_of(path)

    def image_of(self, path: Sequence[int]) -> Path:
        """Reduced image of any path, reduced or not."""
        out: list[int] = []
        for e in path:
            for b in self._images[e]:
                if out and out[-1] == -b:
                    out.pop()
                else:
                    out.append(b)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, UpperTriangularMap):
            return NotImplemented
        return self.graph is other.graph and self.suffixes == other.suffixes

    def __hash__(self):
        return hash(self.suffixes)

    def __repr__(self):
        parts = [f"E{i} -> {format_path((i,) + u)}" for i, u in enumerate(self.suffixes, start=1)]
        return "UpperTriangularMap(" + ", ".join(parts) + ")"

    def compose(self, other: "UpperTriangularMap") -> "UpperTriangularMap":
        """The map self after other."""
        if other.graph is not self.graph:
            raise ValueError("maps live on different graphs")
        return UpperTriangularMap(self.graph, [_join(u, self.image_of(v)) for u, v in zip(self.suffixes, other.suffixes)])

    def power(self, k: int) -> "UpperTriangularMap":
        if k < 0:
            return self.inverse().power(-k)
        result = UpperTriangularMap.identity(self.graph)
        for _ in range(k):
            result = self.compose(result)
        return result

    def inverse(self) -> "UpperTriangularMap":
        """Homotopy inverse, again upper triangular: E_i -> E_i (f^-1(u_i))^-1."""
        inv_images: dict[int, Path] = {}
        suffixes: list[Path] = []

        def image(path):
            out: list[int] = []
            for e in path:
                for b in inv_images[e]:
                    if out and out[-1] == -b:
                        out.pop()
                    else:
                        out.append(b)
            return tuple(out)

        for i, u in enumerate(self.suffixes, start=1):
            s = invert_letters(image(u))
            suffixes.append(s)
            inv_images[i] = (i,) + s
            inv_images[-i] = invert_letters(s) + (-i,)
        return UpperTriangularMap(self.graph, suffixes)

    def fixes_vertices(self) -> bool:
        g = self.graph
        return all(not u or g.end(u) == g.terminus(i) for i, u in enumerate(self.suffixes, start=1))


def apply_path(f: UpperTriangularMap, path: Sequence[int]) -> Path:
    """Reduced image f(path)_# of a reduced path."""
    path = tuple(path)
    if not is_reduced(path):
        raise ValueError("input path is not reduced")
    f.graph.check_path(path)
    return f.image_of(path)


def marked_automorphism(f: UpperTriangularMap, p: Sequence[int] = ()) -> Automorphism:
    """Automorphism alpha -> p^-1 f(alpha) p of pi_1(G, base) read through the marking."""
    g = f.graph
    p = tuple(p)
    if p and not g.is_loop(p, g.base):
        raise IncidenceError("p must be a loop at the base vertex, since every vertex is fixed")
    g.check_path(p)
    finv = f.inverse()
    images = [g.loop_to_word(f.image_of(g.word_to_loop(x))) for x in _basis(g.rank)]
    inverse = [g.loop_to_word(finv.image_of(g.word_to_loop(x))) for x in _basis(g.rank)]
    phi = Automorphism(images, inverse)
    if p:
        phi = compose(inner(g.loop_to_word(reduce_letters(p))), phi)
    return phi


def _basis(rank):
    return [Word.generator(i, rank) for i in range(1, rank + 1)]
