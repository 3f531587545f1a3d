"""A depth-3 chain of extensions and the grids that glue cones together.

    python3 demos/chains_and_grids.py
"""

from rankone.construct import build_chain, build_laleche
from rankone.embed import build_grid, diagonal_system
from rankone.intcone import IntegerCone

rep = build_chain(IntegerCone([2, 5]), [5, 161, 30000], 3)
for st in rep.stages:
    print(f"H_{st.index}: N = {st.N:>8}  y = {st.y:>6}  a = {st.a}  cone {st.cone}")
print("states:", [str(s) for s in rep.states])
print(f"{len(rep.verdicts)} checks, all proved: {rep.ok}")

# A grid whose top row and left column are ladders; every edge is an order-embedding.
g = build_grid("cons", {"A": IntegerCone([2, 5]), "q1": 2, "p1": 7, "q2": 3, "p2": 7}, 2, 2)
for i in range(3):
    print("  ".join(f"{str(g[i, j]):<28}" for j in range(3)))
d = diagonal_system(g)
print("diagonal multipliers", d.multipliers)

# The combined grid: an assembled diagonal on top, a chain down the left.
rep = build_laleche([2, 3], [5, 7, 97], 3)
bad = [v for v in rep.verdicts if not v.ok]
print(f"\nlaleche: {len(rep.verdicts)} verdicts, {len(bad)} refuted")
print("diagonal:", [str(c) for c in diagonal_system(rep.grid).stages])
