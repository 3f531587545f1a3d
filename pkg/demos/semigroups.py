"""Tour of integer cones: conductors, gaps, layered extensions, embeddings.

    python3 demos/semigroups.py
"""

from rankone.construct import extend_component
from rankone.embed import MultiplicationMap
from rankone.intcone import IntegerCone, analyze, combine, intersect_scale, parse_cone

# Two generators: the conductor is kl - k - l + 1 and half the numbers below it are gaps.
for gens in ([2, 7], [3, 5], [6, 10, 15]):
    p = analyze(IntegerCone(gens))
    print(f"<{gens}>: conductor {p.conductor}, {len(p.gap_set)} gaps {list(p.gap_set)[:10]}")

# combine() scales and adds two cones, then drops redundant generators.
print("1*<2,5> + 1*<3>  =", combine(1, IntegerCone([2, 5]), 1, IntegerCone([3])))
print("3*<2,5> + 10*<3,7> =", combine(3, IntegerCone([2, 5]), 10, IntegerCone([3, 7])))

# Intersections of cones; with L = 1 the gaps are the union of the gaps.
S = intersect_scale([IntegerCone([2, 7]), IntegerCone([3, 5])], 1)
print("<2,7> cap <3,5> has gaps", S.gaps)

# Extending <2,5> by a = 5 produces a layered cone with a predictable gap per residue.
G, pcd, gp = extend_component(IntegerCone([2, 5]), 5)
print(f"\nextension: G = {G}  (p, c, d) = ({pcd.p}, {pcd.c}, {pcd.d})")
print("one gap per residue mod 5:", gp.L, " conductor", G.conductor)
print("15 in G?", G.contains(15), "   160 in G?", G.contains(160))

# The same cone can be typed in directly.
assert parse_cone("5*<2,5>+6*<6,161>") == G

# Multiplication maps: x2 from <2,5> to itself is positive but not an order-embedding.
for target in ("<4,10,14,35>", "<2,5>"):
    res = MultiplicationMap(2, IntegerCone([2, 5]), parse_cone(target)).check()
    print(f"x2: <2,5> -> {target}: embeds={res.embeds} witness={res.witness}")
