"""Witnesses: one automorphism whose fixed subgroup is a common fixed subgroup.

For upper triangular representatives f, g in normal form the composite
f g^k fixes exactly the common fixed paths once k avoids every ratio
-r_f / r_g.  The engine picks that k, builds the automorphism, and then
refuses to believe it until the word oracle agrees; if it does not, k is
raised and the check repeated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import stallings
from .automorphism import (
    Automorphism,
    compose,
    extend,
    fixed_subgroup_oracle,
    format_automorphism,
    inner,
    iter_fixed_words,
    power,
)
from .filtered_graph.graph import rose
from .filtered_graph.maps import UpperTriangularMap, marked_automorphism
from .filtered_graph.nielsen import NielsenData, Normalization, NormalizationError, fixed_loop_subgroup, normalize
from .free_group import Word, format_word, primitive_root

EQUAL, UNEQUAL, OUT_OF_SCOPE, EXHAUSTED = 0, 2, 3, 4
VERDICTS = {EQUAL: "equal", UNEQUAL: "unequal", OUT_OF_SCOPE: "out of scope", EXHAUSTED: "bound exhausted"}

DEFAULT_DEPTH = 8
MAX_TRIES = 8


class MonotonicityViolation(AssertionError):
    """A word fixed by both automorphisms is not fixed by their composite."""


def choose_k(data: Sequence[NielsenData]) -> int:
    """Smallest k of the form 1 + max ceil(|r_f| / |r_g|) over heights with r_g != 0."""
    best = 0
    for d in data:
        if d.r_g:
            best = max(best, math.ceil(abs(d.r_f) / abs(d.r_g)))
    return 1 + best


def build_witness(f: UpperTriangularMap, g: UpperTriangularMap, k: int) -> tuple[UpperTriangularMap, Automorphism]:
    """The map f g^k and the automorphism it induces through the marking."""
    if k < 1:
        raise ValueError("k must be positive")
    fgk = f.compose(g.power(k))
    return fgk, marked_automorphism(fgk)


def exponent_table(norm: Normalization, k: int) -> list[tuple[int, int, int, int]]:
    """(height, r_f, r_g, r_f + k r_g) for every height in loop form."""
    return [(d.height, d.r_f, d.r_g, d.r_f + k * d.r_g) for d in norm.data if d.form == "loop"]


@dataclass
class Attempt:
    k: int | None
    verdict: str
    depth: int
    distinguishing: Word | None = None


@dataclass
class WitnessReport:
    """Outcome of a witness search; ``status`` doubles as the CLI exit code."""

    status: int
    k: int | None = None
    chi: Automorphism | None = None
    case: str = "upg"
    depth: int = DEFAULT_DEPTH
    depths: list[int] = field(default_factory=list)
    intersection: list[Word] = field(default_factory=list)
    fixed: list[Word] = field(default_factory=list)
    table: list[tuple[int, int, int, int]] = field(default_factory=list)
    attempts: list[Attempt] = field(default_factory=list)
    exact: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return VERDICTS[self.status]

    @property
    def distinguishing(self) -> Word | None:
        words = [a.distinguishing for a in self.attempts if a.distinguishing is not None]
        return min(words, key=Word.sort_key) if words else None

    def to_text(self, names: Sequence[str] | None = None, inputs: Sequence[tuple[str, Automorphism]] = ()) -> str:
        lines = []
        for label, phi in inputs:
            lines.append(f"input {label}: {format_automorphism(phi, names, inline=True)}")
        lines.append(f"case: {self.case}")
        if self.table:
            lines.append("k-table: height r_f r_g r_f+k*r_g")
            for h, rf, rg, tot in self.table:
                lines.append(f"  {h} {rf} {rg} {tot}")
        for a in self.attempts:
            word = "-" if a.distinguishing is None else format_word(a.distinguishing, names)
            label = "attempt" if a.k is None else f"attempt k={a.k}"
            lines.append(f"{label}: {a.verdict} at depth {a.depth}; distinguishing word {word}")
        if self.k is not None:
            lines.append(f"k: {self.k}")
        if self.chi is not None:
            lines.append(f"witness: {format_automorphism(self.chi, names, inline=True)}")
        lines.append(f"intersection rank: {len(self.intersection)}")
        for w in self.intersection:
            lines.append(f"  basis: {format_word(w, names)}")
        if self.fixed:
            lines.append(f"witness fixed rank: {len(self.fixed)}")
            for w in self.fixed:
                lines.append(f"  basis: {format_word(w, names)}")
        if self.exact is not None:
            lines.append(f"exact check through filtered representatives: {'pass' if self.exact else 'fail'}")
        lines.append("depths: " + " ".join(str(d) for d in self.depths))
        for n in self.notes:
            lines.append(f"note: {n}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def _common(phi: Automorphism, psi: Automorphism, depth: int) -> stallings.SubgroupGraph:
    a = fixed_subgroup_oracle(phi, depth)
    b = fixed_subgroup_oracle(psi, depth)
    return stallings.intersect(a.graph, b.graph)


def distinguishing_word(chi: Automorphism, phi: Automorphism, psi: Automorphism, depth: int) -> Word | None:
    """Length-lex first word of length <= depth fixed by chi but not by both phi and psi."""
    for w in iter_fixed_words(chi, depth):
        if phi(w) != w or psi(w) != w:
            return w
    return None


def check_monotone(chi: Automorphism, phi: Automorphism, psi: Automorphism, depth: int) -> None:
    """Every word fixed by both phi and psi must be fixed by chi."""
    common = _common(phi, psi, depth)
    for w in stallings.basis(common):
        if chi(w) != w:
            raise MonotonicityViolation(f"{w} is fixed by both inputs but not by the witness")


def verify_witness(
    phi: Automorphism,
    psi: Automorphism,
    chi: Automorphism,
    depth: int = DEFAULT_DEPTH,
    exact: tuple[Normalization, UpperTriangularMap] | None = None,
    k: int | None = None,
) -> WitnessReport:
    """Compare oracle Fix chi with Fix phi ∩ Fix psi at ``depth`` and ``depth + 2``.

    With ``exact = (normalization, f g^k)`` the fixed loop subgroups of the
    composite and of the normalized pair are also compared.
    """
    if depth < 4:
        raise ValueError("depth must be at least 4")
    report = WitnessReport(UNEQUAL, k=k, chi=chi, depth=depth)
    for L in (depth, depth + 2):
        report.depths.append(L)
        common = _common(phi, psi, L)
        fix_chi = fixed_subgroup_oracle(chi, L).graph
        if not stallings.contains(fix_chi, common):
            raise MonotonicityViolation("the common fixed subgroup is not inside the witness fixed subgroup")
        if not stallings.equal_subgroups(fix_chi, common):
            report.depth = L
            word = distinguishing_word(chi, phi, psi, L)
            report.attempts.append(Attempt(k, "unequal", L, word))
            report.intersection = stallings.basis(common)
            report.fixed = stallings.basis(fix_chi)
            return report
    report.intersection = stallings.basis(common)
    report.fixed = stallings.basis(fix_chi)
    if exact is not None:
        norm, fgk = exact
        try:
            pair = fixed_loop_subgroup(norm, length_bound=depth)
            alone = normalize(fgk, fgk, norm.bound, check_uniqueness=False)
            single = fixed_loop_subgroup(alone, length_bound=depth)
            ok = stallings.equal_subgroups(pair, single) and stallings.equal_subgroups(pair, common)
        except NormalizationError as exc:
            ok = False
            report.notes.append(str(exc))
        report.exact = ok
        if not ok:
            report.attempts.append(Attempt(k, "unequal (exact check)", depth, None))
            return report
    report.status = EQUAL
    report.attempts.append(Attempt(k, "equal", depth, None))
    return report


def escalate(
    phi: Automorphism,
    psi: Automorphism,
    k0: int = 1,
    depth: int = DEFAULT_DEPTH,
    tries: int = MAX_TRIES,
    norm: Normalization | None = None,
) -> WitnessReport:
    """Try chi = phi psi^k for k = k0, k0 + 1, ... and keep the first that verifies."""
    attempts: list[Attempt] = []
    last = None
    for k in range(k0, k0 + tries):
        chi = compose(phi, power(psi, k))
        exact = None
        if norm is not None:
            fgk, chi_graph = build_witness(norm.f, norm.g, k)
            if chi_graph != chi:
                raise NormalizationError("marked witness disagrees with the composite of the inputs")
            exact = (norm, fgk)
        report = verify_witness(phi, psi, chi, depth, exact=exact, k=k)
        attempts += report.attempts
        last = report
        if report.status == EQUAL:
            break
    assert last is not None
    last.attempts = attempts
    if last.status != EQUAL:
        last.status = EXHAUSTED
        last.k = None
        last.chi = None
        last.notes.append(f"no k in {k0}..{k0 + tries - 1} verified")
    if norm is not None:
        last.table = exponent_table(norm, last.k if last.k is not None else k0)
    return last


def extend_by_inversion(chi_h: Automorphism, n: int) -> Automorphism:
    """Extend from <x_1..x_r> to F_n by inverting x_{r+1}..x_n."""
    return extend(chi_h, n)


def _rank0_witness(n: int, depth: int) -> Automorphism | None:
    # inverting every letter, then the cyclic permutation x_i -> x_{i+1}
    invert_all = [(-i,) for i in range(1, n + 1)]
    shift = [(i % n + 1,) for i in range(1, n + 1)]
    unshift = [((i - 2) % n + 1,) for i in range(1, n + 1)]
    for images, inverse in ((invert_all, invert_all), (shift, unshift)):
        chi = Automorphism.from_letters(images, inverse)
        if not fixed_subgroup_oracle(chi, depth).generators:
            return chi
    return None


def upg_certified(phi: Automorphism, psi: Automorphism, norm: Normalization | None = None) -> bool:
    """A pair counts as certified when upper triangular representatives are known.

    Either ``norm`` is supplied and its marked maps equal the inputs, or both
    automorphisms are upper triangular on the standard rose.
    """
    if norm is not None:
        return marked_automorphism(norm.f) == phi and marked_automorphism(norm.g) == psi
    return rose_map(phi) is not None and rose_map(psi) is not None


def rose_map(phi: Automorphism, graph=None) -> UpperTriangularMap | None:
    """phi as an upper triangular map on the rose, when x_i -> x_i u_i with u_i in <x_1..x_{i-1}>."""
    suffixes = []
    for i in range(1, phi.rank + 1):
        img = phi.image_letters(i)
        if not img or img[0] != i or any(abs(a) >= i for a in img[1:]):
            return None
        suffixes.append(img[1:])
    return UpperTriangularMap(graph or rose(phi.rank), suffixes)


def witness_search(
    phi: Automorphism,
    psi: Automorphism,
    depth: int = DEFAULT_DEPTH,
    norm: Normalization | None = None,
    length_bound: int = 8,
) -> WitnessReport:
    """Dispatch on the rank of the common fixed subgroup and produce a verified witness."""
    if phi.rank != psi.rank:
        raise ValueError("automorphisms of different rank")
    n = phi.rank
    common = _common(phi, psi, depth)
    basis = stallings.basis(common)
    if len(basis) == 0:
        chi = _rank0_witness(n, depth)
        if chi is None:
            return WitnessReport(OUT_OF_SCOPE, case="rank 0", notes=["no fixed point free candidate verified"])
        report = verify_witness(phi, psi, chi, depth)
        report.case = "rank 0"
        return report
    if len(basis) == 1:
        root, _ = primitive_root(basis[0])
        report = verify_witness(phi, psi, inner(root), depth)
        report.case = "rank 1"
        return report
    if not upg_certified(phi, psi, norm):
        report = WitnessReport(OUT_OF_SCOPE, case="exponential or uncertified")
        report.intersection = basis
        report.depths = [depth]
        report.notes.append("no upper triangular representatives; the exponential case is out of scope")
        return report
    if norm is None:
        G = rose(n)
        norm = normalize(rose_map(phi, G), rose_map(psi, G), length_bound)
    notes = []
    if any(d.form == "none" for d in norm.data):
        report, why = free_factor_witness(phi, psi, norm, depth, length_bound)
        if report is not None and report.status == EQUAL:
            report.case = f"rank {len(basis)}, inside a free factor"
            return report
        notes.append(f"free factor route: {why}")
    k0 = choose_k(norm.data)
    report = escalate(phi, psi, k0, depth, norm=norm)
    report.case = f"rank {len(basis)}, upper triangular"
    report.notes = notes + report.notes
    return report


def invariant_free_factor(norm: Normalization) -> list[int] | None:
    """Heights of a sub-rose that both maps preserve and that skips every height without a common INP.

    Common fixed loops never cross such a height, so the fixed subgroup lies in
    the free factor carried by the sub-rose.  Only roses are handled.
    """
    G = norm.graph
    if len(G.vertices) != 1:
        return None
    dropped = {d.height for d in norm.data if d.form == "none"}
    keep = [i for i in range(1, G.n_edges + 1) if i not in dropped]
    if not dropped or not keep:
        return None
    for m in (norm.f, norm.g):
        if any(abs(a) in dropped for i in keep for a in m.suffixes[i - 1]):
            return None
    return keep


def free_factor_witness(
    phi: Automorphism, psi: Automorphism, norm: Normalization, depth: int, length_bound: int = 8
) -> tuple[WitnessReport | None, str]:
    """Solve the restricted pair on an invariant sub-rose, then invert the other petals.

    Returns the verified report (or None) and a short reason for the log.
    """
    keep = invariant_free_factor(norm)
    if keep is None:
        return None, "no invariant sub-rose avoids the heights without a common INP"
    index = {h: j for j, h in enumerate(keep, start=1)}

    def down(path):
        return tuple(index[a] if a > 0 else -index[-a] for a in path)

    def up(path):
        return tuple(keep[a - 1] if a > 0 else -keep[-a - 1] for a in path)

    H = rose(len(keep))
    f = UpperTriangularMap(H, [down(norm.f.suffixes[h - 1]) for h in keep])
    g = UpperTriangularMap(H, [down(norm.g.suffixes[h - 1]) for h in keep])
    sub = witness_search(marked_automorphism(f), marked_automorphism(g), depth, normalize(f, g, length_bound), length_bound)
    label = "<" + ", ".join(f"E{h}" for h in keep) + ">"
    if sub.status != EQUAL:
        return None, f"restricted pair on {label} gave {sub.verdict}"
    # the witness in edge coordinates, then read through the marking
    n = norm.graph.n_edges
    images = [(-i,) for i in range(1, n + 1)]
    inverse = list(images)
    chi_inv = sub.chi.inverse()
    for h in keep:
        images[h - 1] = up(sub.chi.image_letters(index[h]))
        inverse[h - 1] = up(chi_inv.image_letters(index[h]))
    chi_edges = Automorphism.from_letters(images, inverse)
    m = norm.graph.marking
    chi = compose(m.inverse(), compose(chi_edges, m))
    report = verify_witness(phi, psi, chi, depth)
    report.exact = sub.exact
    report.notes.append(f"witness on {label} ({sub.case}, k={sub.k}) extended by inverting the other petals")
    return report, "verified" if report.status == EQUAL else f"extension gave {report.verdict}"


def rank3_witness_search(phi: Automorphism, psi: Automorphism, depth: int = DEFAULT_DEPTH, norm=None) -> WitnessReport:
    if phi.rank != 3 or psi.rank != 3:
        raise ValueError("rank3_witness_search needs automorphisms of F_3")
    return witness_search(phi, psi, depth, norm)
