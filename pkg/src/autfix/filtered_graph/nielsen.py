"""Common Nielsen paths of a pair of upper triangular maps, sliding, normalization.

All searches here are bounded by path length and report the bound they used.
The underlying search looks for reduced paths gamma, starting at a given
vertex, with ``gamma^-1 t_h h(gamma) == target_h`` for every map h.  The
running value ``D_h(p) = p^-1 t_h h(p)`` changes by ``e^-1 D h(e)`` per edge,
and a prefix is abandoned once ``|D_h|`` exceeds what the remaining edges
could still cancel.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .. import stallings
from ..automorphism import Automorphism
from ..free_group import Word, _join, invert_letters, letter_key, reduce_letters, root_letters
from .calculus import (
    SearchBoundExhausted,
    basic_decomposition,
    loops_generate_rank,
    make_G_reduced,
)
from .graph import FilteredGraph, IncidenceError, Path, default_tree, format_path, height
from .maps import UpperTriangularMap

DEFAULT_STATE_BUDGET = 200_000


class NormalizationError(RuntimeError):
    """Normalization met a configuration the theory rules out."""


class ConstructionDisagreement(RuntimeError):
    """The proof construction failed where exhaustive search succeeded."""

    def __init__(self, message, delta):
        super().__init__(message)
        self.delta = delta


class _BudgetExceeded(Exception):
    pass


def path_sort_key(path: Sequence[int]):
    return (len(path), [letter_key(e) for e in path])


# ---------------------------------------------------------------------------
# twisted fixed path search


class _Search:
    def __init__(self, maps, start, max_height, twists, targets, end=None):
        self.graph: FilteredGraph = maps[0].graph
        self.maps = maps
        self.start = start
        self.end = end
        self.max_height = max_height
        self.twists = [reduce_letters(t) for t in twists]
        self.targets = [reduce_letters(t) for t in targets]
        self.images = [m._images for m in maps]
        edges = [e for i in range(1, max_height + 1) for e in (i, -i)]
        self.slack = [1 + max((len(im[e]) for e in edges), default=0) for im in self.images]
        self.moves = {v: self.graph.outgoing(v, max_height) for v in range(len(self.graph.vertices))}

    @staticmethod
    def step(D, e, image):
        # e^-1 D h(e)
        if D and D[0] == e:
            D = D[1:]
        else:
            D = (-e,) + D
        return _join(D, image)

    def feasible(self, Ds, remaining):
        for D, t, c in zip(Ds, self.targets, self.slack):
            if len(D) > remaining * c + len(t):
                return False
        return True

    def is_solution(self, Ds, vertex):
        return (self.end is None or vertex == self.end) and all(D == t for D, t in zip(Ds, self.targets))

    def all_paths(self, bound, cut_fixed_prefix=False, include_trivial=False) -> list[Path]:
        """Every solution of length <= bound (DFS, no state merging)."""
        found: list[Path] = []
        Ds0 = tuple(self.twists)
        if include_trivial and self.is_solution(Ds0, self.start):
            found.append(())
        if cut_fixed_prefix and all(not D for D in Ds0):
            return found
        path: list[int] = []

        def dfs(vertex, Ds):
            if len(path) == bound:
                return
            remaining = bound - len(path) - 1
            for e in self.moves[vertex]:
                if path and path[-1] == -e:
                    continue
                nDs = tuple(self.step(D, e, im[e]) for D, im in zip(Ds, self.images))
                if not self.feasible(nDs, remaining):
                    continue
                w = self.graph.terminus(e)
                path.append(e)
                if self.is_solution(nDs, w):
                    found.append(tuple(path))
                if not (cut_fixed_prefix and all(not D for D in nDs)):
                    dfs(w, nDs)
                path.pop()

        dfs(self.start, Ds0)
        found.sort(key=path_sort_key)
        return found

    def shortest(self, bound, cut_fixed_prefix=False, include_trivial=False, budget=DEFAULT_STATE_BUDGET):
        """Shortest solution of length <= bound, merging equal search states."""
        Ds0 = tuple(self.twists)
        if include_trivial and self.is_solution(Ds0, self.start):
            return ()
        if cut_fixed_prefix and all(not D for D in Ds0):
            return None
        start_state = (self.start, 0, Ds0)
        parent = {start_state: None}
        layer = [start_state]
        for depth in range(1, bound + 1):
            remaining = bound - depth
            nxt = []
            for state in layer:
                vertex, last, Ds = state
                for e in self.moves[vertex]:
                    if last == -e:
                        continue
                    nDs = tuple(self.step(D, e, im[e]) for D, im in zip(Ds, self.images))
                    if not self.feasible(nDs, remaining):
                        continue
                    w = self.graph.terminus(e)
                    new = (w, e, nDs)
                    if new in parent:
                        continue
                    parent[new] = (state, e)
                    if self.is_solution(nDs, w):
                        return self._trace(parent, new)
                    if cut_fixed_prefix and all(not D for D in nDs):
                        continue
                    nxt.append(new)
                    if len(parent) > budget:
                        raise _BudgetExceeded(depth)
            layer = nxt
            if not layer:
                break
        return None

    @staticmethod
    def _trace(parent, state):
        out = []
        while parent[state] is not None:
            state, e = parent[state]
            out.append(e)
        return tuple(reversed(out))


def is_common_NP(f: UpperTriangularMap, g: UpperTriangularMap, path: Sequence[int]) -> bool:
    """f(path)_# == path == g(path)_# for a reduced path."""
    path = reduce_letters(path)
    return f.image_of(path) == path and g.image_of(path) == path


def common_INPs_at_height(f: UpperTriangularMap, g: UpperTriangularMap, r: int, length_bound: int) -> list[Path]:
    """Common INPs of height r with inner segment of length <= length_bound.

    Each INP is reported once, in the orientation that begins with E_r.  A
    Nielsen path counts as indivisible when no proper initial segment is
    itself a Nielsen path.
    """
    G = f.graph
    u, v = f.suffixes[r - 1], g.suffixes[r - 1]
    if not u and not v:
        return [(r,)]
    t = G.terminus(r)
    open_form = _Search([f, g], t, r - 1, [u, v], [(), ()]).all_paths(length_bound, cut_fixed_prefix=True)
    closed_form = _Search([f, g], t, r - 1, [u, v], [u, v], end=t).all_paths(length_bound, cut_fixed_prefix=True)
    inps = [(r,) + gamma for gamma in open_form]
    inps += [(r,) + gamma + (-r,) for gamma in closed_form if gamma]
    inps.sort(key=path_sort_key)
    return inps


def common_nielsen_paths(f: UpperTriangularMap, g: UpperTriangularMap, length_bound: int) -> list[Path]:
    """Every nontrivial reduced common NP of length <= length_bound, both orientations."""
    G = f.graph
    found: list[Path] = []
    for v in range(len(G.vertices)):
        found += _Search([f, g], v, G.n_edges, [(), ()], [(), ()]).all_paths(length_bound)
    found.sort(key=path_sort_key)
    return found


def crosses(path: Sequence[int], r: int) -> bool:
    return r in path or -r in path


def inp_root(inp: Sequence[int]) -> tuple[Path, int]:
    """(root, exponent) of the inner loop of an INP E_r gamma E_r^-1, up to orientation."""
    gamma = tuple(inp[1:-1])
    root, e = root_letters(gamma)
    inv = invert_letters(root)
    if path_sort_key(inv) < path_sort_key(root):
        return inv, -e
    return root, e


def unique_up_to_power(inps: Sequence[Path]) -> bool:
    """True when the INPs are E_r alone or all E_r beta^m E_r^-1 for one beta."""
    if not inps:
        return False
    if len(inps) == 1:
        return True
    if any(len(p) < 2 or p[-1] != -p[0] for p in inps):
        return False
    return len({inp_root(p)[0] for p in inps}) == 1


# ---------------------------------------------------------------------------
# sliding


def substitute(tau: dict[int, Path], path: Sequence[int]) -> Path:
    return reduce_letters(b for e in path for b in tau.get(e, (e,)))


@dataclass(frozen=True)
class Slide:
    graph: FilteredGraph
    f: UpperTriangularMap
    g: UpperTriangularMap
    tau: dict = field(repr=False)
    tau_inverse: dict = field(repr=False)

    def push(self, path: Sequence[int]) -> Path:
        """Image of a path of the old graph under the homotopy equivalence."""
        return substitute(self.tau, path)

    def pull(self, path: Sequence[int]) -> Path:
        return substitute(self.tau_inverse, path)


def slide(f: UpperTriangularMap, g: UpperTriangularMap, r: int, delta: Sequence[int]) -> Slide:
    """Slide E_r along delta: the new E_r is the old E_r followed by delta."""
    G = f.graph
    if g.graph is not G:
        raise ValueError("maps live on different graphs")
    delta = reduce_letters(delta)
    if height(delta) >= r:
        raise ValueError(f"delta has height {height(delta)}, must be below {r}")
    G.check_path(delta)
    if delta and G.origin(delta[0]) != G.terminus(r):
        raise IncidenceError(f"delta must start at the end of E{r}")
    if not delta:
        return Slide(G, f, g, {}, {})
    tau = {r: (r,) + invert_letters(delta), -r: delta + (-r,)}
    tau_inv = {r: (r,) + delta, -r: invert_letters(delta) + (-r,)}
    ends = list(G.ends)
    ends[r - 1] = (G.origin(r), G.end(delta))
    try:
        bare = FilteredGraph(G.vertices, ends, G.base, G.tree)
    except ValueError:
        bare = FilteredGraph(G.vertices, ends, G.base, default_tree(len(G.vertices), ends))
    basis = [Word.generator(i, G.rank) for i in range(1, G.rank + 1)]
    images = [bare.tree_word(substitute(tau, G.word_to_loop(x))) for x in basis]
    inverse = [G.loop_to_word(substitute(tau_inv, bare.tree_loop(x))) for x in basis]
    H = FilteredGraph(G.vertices, ends, G.base, bare.tree, Automorphism(images, inverse))

    def moved(h: UpperTriangularMap) -> UpperTriangularMap:
        suffixes = []
        for i, u in enumerate(h.suffixes, start=1):
            if i == r:
                suffixes.append(reduce_letters(invert_letters(delta) + u + h.image_of(delta)))
            else:
                suffixes.append(substitute(tau, u))
        return UpperTriangularMap(H, suffixes)

    return Slide(H, moved(f), moved(g), tau, tau_inv)


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True)
class NielsenData:
    """What normalization learned about one height.

    ``form`` is ``"edge"`` when E_r itself is the common INP, ``"loop"`` when
    it is E_r beta E_r^-1, and ``"none"`` when no common NP of height r turned
    up within ``search_bound``.
    """

    height: int
    form: str
    beta: Path | None = None
    r_f: int = 0
    r_g: int = 0
    search_bound: int = 0
    inp_unique: bool | None = None

    @property
    def inp(self) -> Path | None:
        if self.form == "edge":
            return (self.height,)
        if self.form == "loop":
            return (self.height,) + self.beta + (-self.height,)
        return None

    def describe(self) -> str:
        if self.form == "none":
            return f"height {self.height}: no common INP found (search bound {self.search_bound})"
        beta = "-" if self.beta is None else format_path(self.beta)
        return (
            f"height {self.height}: form {self.form} beta {beta} r_f {self.r_f} r_g {self.r_g} "
            f"inp {format_path(self.inp)} unique {self.inp_unique} (search bound {self.search_bound})"
        )


@dataclass(frozen=True)
class Normalization:
    graph: FilteredGraph
    f: UpperTriangularMap
    g: UpperTriangularMap
    data: tuple[NielsenData, ...]
    slides: tuple[tuple[int, Path], ...] = ()
    bound: int = 8

    def at(self, r: int) -> NielsenData:
        return self.data[r - 1]


def _power_exponent(suffix: Path, beta: Path) -> int | None:
    if not suffix:
        return 0
    for sign, step in ((1, beta), (-1, invert_letters(beta))):
        m, rem = divmod(len(suffix), len(step))
        if rem == 0 and suffix == step * m:
            return sign * m
    return None


def normalize(
    f: UpperTriangularMap,
    g: UpperTriangularMap,
    length_bound: int = 8,
    escalations: int = 3,
    budget: int = DEFAULT_STATE_BUDGET,
    strict: bool = False,
    check_uniqueness: bool = True,
) -> Normalization:
    """Slide edges, lowest first, until every height has the controlled form.

    At height r the search looks for a common INP E_r gamma (then E_r is slid
    along gamma and becomes fixed) and otherwise for E_r gamma E_r^-1 (then
    E_r is slid so that both suffixes become powers of one G-reduced loop
    beta).  When neither turns up, the bound doubles up to ``escalations``
    times while the search stays within ``budget`` states; a height still
    without an INP is recorded with form ``"none"``, or raises
    :class:`SearchBoundExhausted` when ``strict``.
    """
    if g.graph is not f.graph:
        raise ValueError("maps live on different graphs")
    data: list[NielsenData] = []
    slides: list[tuple[int, Path]] = []
    for r in range(1, f.graph.n_edges + 1):
        G = f.graph
        u, v = f.suffixes[r - 1], g.suffixes[r - 1]
        if not u and not v:
            data.append(NielsenData(r, "edge", search_bound=0, inp_unique=True))
            continue
        t = G.terminus(r)
        bound = length_bound
        found = None
        used = bound
        for attempt in range(escalations + 1):
            used = bound
            try:
                gamma = _Search([f, g], t, r - 1, [u, v], [(), ()]).shortest(bound, cut_fixed_prefix=True, budget=budget)
                if gamma is not None:
                    found = ("edge", gamma)
                    break
                gamma = _Search([f, g], t, r - 1, [u, v], [u, v], end=t).shortest(bound, cut_fixed_prefix=True, budget=budget)
                if gamma:
                    found = ("loop", gamma)
                    break
            except _BudgetExceeded:
                used = bound
                break
            bound *= 2
        if found is None:
            if strict:
                raise SearchBoundExhausted(f"no common INP of height {r} within length {used}")
            data.append(NielsenData(r, "none", search_bound=used))
            continue
        kind, gamma = found
        if kind == "edge":
            s = slide(f, g, r, gamma)
            slides.append((r, gamma))
            f, g = s.f, s.g
            if f.suffixes[r - 1] or g.suffixes[r - 1]:
                raise NormalizationError(f"slide along a Nielsen path did not fix E{r}")
            data.append(NielsenData(r, "edge", search_bound=used, inp_unique=True))
            continue
        root, _ = root_letters(gamma)
        delta, beta = make_G_reduced(G, root)
        s = slide(f, g, r, delta)
        if delta:
            slides.append((r, delta))
        f, g = s.f, s.g
        r_f = _power_exponent(f.suffixes[r - 1], beta)
        r_g = _power_exponent(g.suffixes[r - 1], beta)
        if r_f is None or r_g is None:
            raise NormalizationError(f"suffixes at height {r} are not powers of {format_path(beta)}")
        if not is_common_NP(f, g, beta):
            raise NormalizationError(f"beta at height {r} is not a common Nielsen path")
        unique = None
        if check_uniqueness:
            unique = unique_up_to_power(common_INPs_at_height(f, g, r, length_bound))
        data.append(NielsenData(r, "loop", beta, r_f, r_g, used, unique))
    return Normalization(f.graph, f, g, tuple(data), tuple(slides), length_bound)


# ---------------------------------------------------------------------------
# fixed subgroups through INPs


def inp_edges(norm: Normalization) -> list[tuple[int, Path, int]]:
    """(start vertex, INP, end vertex) for the root INP at each height."""
    G = norm.graph
    out = []
    for d in norm.data:
        if d.form == "none":
            continue
        inp = d.inp
        out.append((G.origin(inp[0]), inp, G.terminus(inp[-1])))
    return out


def fixed_loop_subgroup(
    norm: Normalization,
    vertex: int | None = None,
    length_bound: int | None = 8,
) -> stallings.SubgroupGraph:
    """Subgroup of loops at ``vertex`` fixed by both normalized maps, in marked coordinates.

    Generators come from walks in the graph whose edges are the common INPs.
    With a ``length_bound`` every fixed loop at the vertex up to that length is
    also enumerated directly and must lie in the result.
    """
    G, f, g = norm.graph, norm.f, norm.g
    v0 = G.base if vertex is None else vertex
    edges = inp_edges(norm)
    for _, inp, _ in edges:
        if not is_common_NP(f, g, inp):
            raise NormalizationError(f"{format_path(inp)} is recorded as an INP but is not fixed")
    # spanning tree of the INP graph from v0
    reach: dict[int, Path] = {v0: ()}
    queue = deque([v0])
    used = set()
    while queue:
        x = queue.popleft()
        for k, (a, inp, b) in enumerate(edges):
            for s, t, p in ((a, b, inp), (b, a, invert_letters(inp))):
                if s == x and t not in reach:
                    reach[t] = reach[x] + p
                    used.add(k)
                    queue.append(t)
    to_base = G.tree_path(v0)
    loops = []
    for k, (a, inp, b) in enumerate(edges):
        if k in used or a not in reach:
            continue
        loops.append(reduce_letters(reach[a] + inp + invert_letters(reach[b])))
    words = [G.loop_to_word(reduce_letters(to_base + l + invert_letters(to_base))) for l in loops]
    sub = stallings.fold(words, G.rank)
    if length_bound:
        for loop in _Search([f, g], v0, G.n_edges, [(), ()], [(), ()], end=v0).all_paths(length_bound):
            w = G.loop_to_word(reduce_letters(to_base + loop + invert_letters(to_base)))
            if not stallings.member(sub, w):
                raise NormalizationError(
                    f"fixed loop {format_path(loop)} is not generated by common INPs; "
                    "raise the INP search bound"
                )
    return sub


def fixed_subgroup_exact(f: UpperTriangularMap, g: UpperTriangularMap | None = None, length_bound: int = 8) -> stallings.SubgroupGraph:
    """Normalize, then read off the common fixed subgroup at the base vertex."""
    norm = normalize(f, f if g is None else g, length_bound)
    return fixed_loop_subgroup(norm, length_bound=length_bound)


# ---------------------------------------------------------------------------
# common conjugator


@dataclass(frozen=True)
class ConjugatorResult:
    delta: Path
    route: str  # "proof" or "search"
    case: str


def _solves(f, g, delta, mu, nu) -> bool:
    return f.image_of(delta) == reduce_letters(delta + invert_letters(mu)) and g.image_of(delta) == reduce_letters(
        delta + invert_letters(nu)
    )


def _subgroup_candidates(alpha1: Path, alpha2: Path, max_len: int = 3) -> Iterator[tuple[Path, tuple]]:
    gens = {1: alpha1, -1: invert_letters(alpha1), 2: alpha2, -2: invert_letters(alpha2)}
    for n in range(1, max_len + 1):
        for word in product((1, -1, 2, -2), repeat=n):
            if any(a == -b for a, b in zip(word, word[1:])):
                continue
            loop = reduce_letters(e for a in word for e in gens[a])
            if loop:
                yield loop, word


def find_common_conjugator(
    f: UpperTriangularMap,
    g: UpperTriangularMap,
    alpha1: Sequence[int],
    alpha2: Sequence[int],
    mu: Sequence[int],
    nu: Sequence[int],
    bound: int = 8,
) -> ConjugatorResult:
    """A path delta with f(delta) ~ delta mu^-1 and g(delta) ~ delta nu^-1.

    delta ends at the basepoint of the alphas, so the loops delta alpha_i
    delta^-1 are fixed by both maps.
    The construction follows the two-case argument (G-reduce a loop of minimal
    height in <alpha1, alpha2>, then split on the height of a second loop);
    the result is checked, and when the construction does not deliver an
    exhaustive search over paths of length <= ``bound`` settles the question.
    """
    G = f.graph
    a1, a2 = reduce_letters(alpha1), reduce_letters(alpha2)
    mu, nu = reduce_letters(mu), reduce_letters(nu)
    if not a1 or not a2 or not G.is_loop(a1) or not G.is_loop(a2) or G.start(a1) != G.start(a2):
        raise ValueError("alpha1 and alpha2 must be nontrivial loops at one vertex")
    v = G.start(a1)
    for p in (mu, nu):
        if p and not G.is_loop(p, v):
            raise ValueError("mu and nu must be loops at the basepoint of the alphas")
    for a in (a1, a2):
        if f.image_of(a) != reduce_letters(mu + a + invert_letters(mu)):
            raise ValueError("f(alpha) is not mu alpha mu^-1")
        if g.image_of(a) != reduce_letters(nu + a + invert_letters(nu)):
            raise ValueError("g(alpha) is not nu alpha nu^-1")
    if loops_generate_rank(G, [a1, a2], v) != 2:
        raise ValueError("alpha1 and alpha2 do not generate a free group of rank 2")
    top = max(height(a1), height(a2))
    if not mu and not nu:
        return ConjugatorResult((), "proof", "trivial twists")

    result = None
    try:
        result = _conjugator_by_proof(f, g, a1, a2, mu, nu, v)
    except (ValueError, NormalizationError):
        result = None
    if result is not None and _solves(f, g, result.delta, mu, nu) and height(result.delta) <= top:
        return result
    # exhaustive search over sigma = delta^-1 from v: f(sigma) ~ mu sigma
    sigma = _Search([f, g], v, top, [invert_letters(mu), invert_letters(nu)], [(), ()]).shortest(
        bound, include_trivial=True
    )
    if sigma is None:
        raise SearchBoundExhausted(
            f"no common conjugator of length <= {bound} although the hypotheses hold; falsification candidate"
        )
    delta = invert_letters(sigma)
    raise ConstructionDisagreement(
        f"construction failed but search found {format_path(delta)}; this is a bug in the construction", delta
    )


def _conjugator_by_proof(f, g, a1, a2, mu, nu, v) -> ConjugatorResult:
    G = f.graph
    best = None
    for loop, word in _subgroup_candidates(a1, a2):
        delta0, alpha = make_G_reduced(G, loop)
        if root_letters(alpha)[1] != 1:
            continue
        key = (height(alpha), len(alpha), len(word))
        if best is None or key < best[0]:
            best = (key, loop, delta0, alpha)
    if best is None:
        raise NormalizationError("no candidate loop")
    _, alpha_prime, delta0, alpha = best
    if f.image_of(alpha) != alpha or g.image_of(alpha) != alpha:
        raise NormalizationError("G-reduced loop is not fixed")
    mu0 = reduce_letters(invert_letters(f.image_of(delta0)) + mu + delta0)
    nu0 = reduce_letters(invert_letters(g.image_of(delta0)) + nu + delta0)
    beta = None
    for loop, _ in _subgroup_candidates(a1, a2):
        if loops_generate_rank(G, [alpha_prime, loop], v) == 2:
            beta = reduce_letters(invert_letters(delta0) + loop + delta0)
            break
    if beta is None:
        raise NormalizationError("no second loop")
    if height(beta) > height(alpha):
        pieces = basic_decomposition(beta)
        if len(pieces) == 1:
            return ConjugatorResult(invert_letters(delta0), "proof", "case 1, basic")
        return ConjugatorResult(reduce_letters(pieces[-1] + invert_letters(delta0)), "proof", "case 1, split")
    if mu0 or nu0:
        raise NormalizationError("case 2 with nontrivial twisted loops")
    return ConjugatorResult(invert_letters(delta0), "proof", "case 2")
