"""Normalizing a pair of upper triangular maps and reading off the Nielsen data.

Run: python3 demos/normalization.py
"""

from autfix.filtered_graph import UpperTriangularMap, common_INPs_at_height, format_path, normalize, rose
from autfix.filtered_graph.nielsen import fixed_loop_subgroup
from autfix.free_group import format_word
from autfix import stallings

G = rose(2)
# f(E2) = E2 E1 E1 and g(E2) = E2 E1^-1: both suffixes are powers of E1.
f = UpperTriangularMap(G, [(), (1, 1)])
g = UpperTriangularMap(G, [(), (-1,)])
norm = normalize(f, g, 8)
for d in norm.data:
    print(d.describe())
# every INP at height 2 is E2 E1^m E2^-1: one INP up to taking powers
inps = common_INPs_at_height(norm.f, norm.g, 2, 8)
print(f"{len(inps)} common INPs at height 2 within the bound, first few:", [format_path(p) for p in inps[:4]])
print("fixed loops:", [format_word(w) for w in stallings.basis(fixed_loop_subgroup(norm))])

# Here E3 only becomes a fixed edge after sliding it along E2.
G = rose(3)
f = UpperTriangularMap(G, [(), (1,), (2, -1, -2)])
g = UpperTriangularMap(G, [(), (1, 1), (2, -1, -1, -2)])
norm = normalize(f, g, 8)
for r, delta in norm.slides:
    print(f"slide E{r} along {format_path(delta)}")
for d in norm.data:
    print(d.describe())
print("normalized suffixes of f:", [format_path(u) if u else "-" for u in norm.f.suffixes])
