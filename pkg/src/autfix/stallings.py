"""Stallings graphs of finitely generated subgroups of a free group.

A :class:`SubgroupGraph` is a folded, cored, based graph whose edges carry
positive basis letters.  Vertices are numbered by a breadth first search from
the basepoint (vertex 0) taking letters in the order x, x^-1, y, y^-1, ...,
which makes the numbering canonical: two graphs describe the same subgroup
exactly when their edge lists coincide.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .free_group import RankMismatch, Word, default_names, letters_in_order


class _Folder:
    """Union-find graph that folds as edges are added."""

    def __init__(self):
        self.parent: list[int] = []
        self.adj: list[dict[int, int]] = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def add_edge(self, u: int, a: int, v: int):
        stack = [(u, a, v), (v, -a, u)]
        while stack:
            u, a, v = stack.pop()
            u, v = self.find(u), self.find(v)
            w = self.adj[u].get(a)
            if w is None:
                self.adj[u][a] = v
                continue
            w = self.find(w)
            if w == v:
                self.adj[u][a] = v
                continue
            # identify v with w and replay v's half edges from w
            self.parent[v] = w
            moved, self.adj[v] = self.adj[v], {}
            for b, z in moved.items():
                stack.append((w, b, z))
                stack.append((z, -b, w))
            stack.append((u, a, w))

    def add_loop(self, base: int, letters: Sequence[int]):
        if not letters:
            return
        current = base
        for i, a in enumerate(letters):
            nxt = base if i == len(letters) - 1 else self.new_vertex()
            self.add_edge(current, a, nxt)
            current = nxt

    def half_edges(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for v in range(len(self.parent)):
            if self.find(v) != v:
                continue
            out[v] = {a: self.find(w) for a, w in self.adj[v].items()}
        return out


def _core_and_number(rank: int, base: int, adj: dict[int, dict[int, int]]) -> "SubgroupGraph":
    adj = {v: dict(d) for v, d in adj.items()}
    # restrict to the basepoint component
    seen = {base}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for w in adj[v].values():
            if w not in seen:
                seen.add(w)
                queue.append(w)
    adj = {v: d for v, d in adj.items() if v in seen}
    # prune hanging trees, keeping the basepoint
    leaves = [v for v, d in adj.items() if v != base and len(d) <= 1]
    while leaves:
        v = leaves.pop()
        if v not in adj or v == base or len(adj[v]) > 1:
            continue
        for a, w in adj.pop(v).items():
            adj[w].pop(-a, None)
            if w != base and len(adj[w]) <= 1:
                leaves.append(w)
    order = letters_in_order(rank)
    number = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for a in order:
            w = adj[v].get(a)
            if w is not None and w not in number:
                number[w] = len(number)
                queue.append(w)
    edges = sorted(
        (number[v], a, number[w]) for v, d in adj.items() for a, w in d.items() if a > 0
    )
    return SubgroupGraph(rank, len(number), edges)


class SubgroupGraph:
    """Folded, cored Stallings graph with basepoint 0."""

    __slots__ = ("rank", "n_vertices", "edges", "_adj")

    def __init__(self, rank: int, n_vertices: int, edges: Iterable[tuple[int, int, int]]):
        self.rank = rank
        self.n_vertices = n_vertices
        self.edges = tuple(edges)
        adj: list[dict[int, int]] = [{} for _ in range(n_vertices)]
        for u, a, v in self.edges:
            if a in adj[u] or -a in adj[v]:
                raise ValueError("graph is not folded")
            adj[u][a] = v
            adj[v][-a] = u
        self._adj = tuple(adj)

    def transition(self, v: int, a: int) -> int | None:
        return self._adj[v].get(a)

    def __eq__(self, other):
        if not isinstance(other, SubgroupGraph):
            return NotImplemented
        return (self.rank, self.n_vertices, self.edges) == (other.rank, other.n_vertices, other.edges)

    def __hash__(self):
        return hash((self.rank, self.n_vertices, self.edges))

    def __repr__(self):
        return f"SubgroupGraph(rank={self.rank}, vertices={self.n_vertices}, edges={len(self.edges)})"

    @property
    def is_folded(self) -> bool:
        return True

    def subgroup_rank(self) -> int:
        return rank(self)

    def basis(self) -> list[Word]:
        return basis(self)


def fold(generators: Iterable[Word], rank: int | None = None) -> SubgroupGraph:
    """Stallings graph of the subgroup generated by ``generators``."""
    gens = list(generators)
    if rank is None:
        if not gens:
            raise ValueError("rank is required for an empty generating set")
        rank = gens[0].rank
    for w in gens:
        if w.rank != rank:
            raise RankMismatch(f"generator of rank {w.rank} in a rank {rank} subgroup")
    folder = _Folder()
    base = folder.new_vertex()
    for w in gens:
        folder.add_loop(base, w.letters)
    return _core_and_number(rank, folder.find(base), folder.half_edges())


def trivial_subgroup(rank: int) -> SubgroupGraph:
    return SubgroupGraph(rank, 1, ())


def whole_group(rank: int) -> SubgroupGraph:
    return SubgroupGraph(rank, 1, [(0, i, 0) for i in range(1, rank + 1)])


def member(G: SubgroupGraph, w: Word) -> bool:
    if w.rank != G.rank:
        raise RankMismatch(f"rank {w.rank} word tested against rank {G.rank} subgroup")
    return member_letters(G, w.letters)


def member_letters(G: SubgroupGraph, letters) -> bool:
    adj = G._adj
    v = 0
    for a in letters:
        v = adj[v].get(a)
        if v is None:
            return False
    return v == 0


def rank(G: SubgroupGraph) -> int:
    return len(G.edges) - G.n_vertices + 1


def _tree_paths(G: SubgroupGraph) -> tuple[list[tuple[int, ...]], set[tuple[int, int, int]]]:
    paths: list[tuple[int, ...] | None] = [None] * G.n_vertices
    paths[0] = ()
    tree: set[tuple[int, int, int]] = set()
    queue = deque([0])
    order = letters_in_order(G.rank)
    while queue:
        v = queue.popleft()
        for a in order:
            w = G.transition(v, a)
            if w is not None and paths[w] is None:
                paths[w] = paths[v] + (a,)
                tree.add((v, a, w) if a > 0 else (w, -a, v))
                queue.append(w)
    return paths, tree


def basis(G: SubgroupGraph) -> list[Word]:
    """Free basis read off a BFS spanning tree, one element per non-tree edge."""
    paths, tree = _tree_paths(G)
    out = []
    for e in G.edges:
        if e in tree:
            continue
        u, a, v = e
        letters = paths[u] + (a,) + tuple(-b for b in reversed(paths[v]))
        out.append(Word(letters, G.rank))
    return out


def intersect(G: SubgroupGraph, H: SubgroupGraph) -> SubgroupGraph:
    """Pullback of two Stallings graphs at the pair of basepoints."""
    if G.rank != H.rank:
        raise RankMismatch(f"cannot intersect rank {G.rank} and rank {H.rank} subgroups")
    order = letters_in_order(G.rank)
    index = {(0, 0): 0}
    adj: dict[int, dict[int, int]] = {0: {}}
    queue = deque([(0, 0)])
    while queue:
        p, q = queue.popleft()
        i = index[(p, q)]
        for a in order:
            p2, q2 = G.transition(p, a), H.transition(q, a)
            if p2 is None or q2 is None:
                continue
            key = (p2, q2)
            if key not in index:
                index[key] = len(index)
                adj[index[key]] = {}
                queue.append(key)
            adj[i][a] = index[key]
    return _core_and_number(G.rank, 0, adj)


def contains(G: SubgroupGraph, H: SubgroupGraph) -> bool:
    """True when H is a subgroup of G."""
    return all(member(G, w) for w in basis(H))


def equal_subgroups(G: SubgroupGraph, H: SubgroupGraph) -> bool:
    if G.rank != H.rank:
        raise RankMismatch(f"rank {G.rank} and rank {H.rank} subgroups compared")
    return contains(G, H) and contains(H, G)


def to_dot(G: SubgroupGraph, names: Sequence[str] | None = None, title: str = "subgroup") -> str:
    """DOT text: one arc per positive letter transition, basepoint double circled."""
    names = names or default_names(G.rank)
    lines = [f'digraph "{title}" {{', "  rankdir=LR;"]
    for v in range(G.n_vertices):
        shape = "doublecircle" if v == 0 else "circle"
        lines.append(f'  {v} [shape={shape}, label="{v}"];')
    for u, a, v in G.edges:
        lines.append(f'  {u} -> {v} [label="{names[a - 1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
