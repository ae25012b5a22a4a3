"""Fixed subgroups from the word oracle, folded into Stallings graphs.

Run: python3 demos/fixed_subgroups.py
"""

from autfix import stallings
from autfix.automorphism import Automorphism, fixed_subgroup_oracle, periodic_implies_fixed_check
from autfix.free_group import format_word, parse_word


def aut(*images):
    return Automorphism([parse_word(t, len(images)) for t in images])


def show(label, phi, L=8):
    rep = fixed_subgroup_oracle(phi, L)
    words = ", ".join(format_word(w) for w in rep.generators) or "trivial"
    print(f"{label}: Fix = <{words}>  (rank {rep.rank}, saturated at L={L}: {rep.saturated})")
    return rep


# A single Dehn twist y -> y x fixes x and the conjugate y x y^-1.
twist = show("y -> y x", aut("x", "y x"))

# Twisting two letters by x: the fixed subgroup grows to rank 3.
phi = show("y -> y x, z -> z x", aut("x", "y x", "z x"))
# y z^-1 is fixed too, since the two twists cancel.
print("  y z^-1 fixed:", stallings.member(phi.graph, parse_word("y z^-1", 3)))

# Intersections are pullbacks of the folded graphs.
a = fixed_subgroup_oracle(aut("x", "y x", "z"), 8).graph
b = fixed_subgroup_oracle(aut("x", "y", "z x"), 8).graph
meet = stallings.intersect(a, b)
print("intersection basis:", [format_word(w) for w in stallings.basis(meet)])

# Periodic words are fixed words for these maps: nothing new appears up to phi^6.
print("periodic but not fixed, |w| <= 8:", periodic_implies_fixed_check(aut("x", "y x", "z y"), 6, 8))

# The graph itself, ready for dot(1).
print(stallings.to_dot(twist.graph, None, "Fix"))
