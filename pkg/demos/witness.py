"""One automorphism whose fixed subgroup is the common fixed subgroup of two.

Run: python3 demos/witness.py
"""

from autfix.automorphism import Automorphism
from autfix.engine import witness_search
from autfix.free_group import parse_word


def aut(*images):
    return Automorphism([parse_word(t, len(images)) for t in images])


# phi twists y by x and psi twists z by x.  phi psi fixes y z^-1 although
# phi does not, so k = 1 is rejected; phi psi^2 works.
phi, psi = aut("x", "y x", "z"), aut("x", "y", "z x")
print(witness_search(phi, psi, 8).to_text(None, [("phi", phi), ("psi", psi)]))

# Twisting z by x and by y: every product of the two fixes some z w z^-1,
# so the witness lives on the free factor <x, y> and inverts z.
phi, psi = aut("x", "y", "z x"), aut("x", "y", "z y")
print(witness_search(phi, psi, 8).to_text(None, [("phi", phi), ("psi", psi)]))

# Exponential growth is out of scope, so no witness is offered.
phi = aut("x", "y z", "z y z")
print(witness_search(phi, phi, 8).to_text(None, [("phi", phi)]))
