"""The rational monoid M for (q, p, s, r) = (2, 7, 10, 3) and its interval D.

    python3 demos/block_monoid.py
"""

from fractions import Fraction

from rankone import intervals
from rankone.ratcone import check_covers, check_not_multiple, interval_D, new_block

b = new_block(2, 7, 10, 3)
print(b, " A =", b.A, " B =", b.B)

# Two membership procedures: peel off levels, or push into the integer ladder.
for x in ("10/3", "7/3", "110/9", "1", "113/3"):
    x = Fraction(x)
    print(f"{str(x):>6}: direct={b.contains_direct(x)!s:5} ladder={b.contains_ladder(x)!s:5}"
          f"  decomposition={b.decompose(x)}")

print("\nladder stages:", [str(b.ladder.stage(i)) for i in range(3)])

# s is never below t*e_m for t < r, checked on a prefix of levels.
for t in (1, 2):
    print(check_not_multiple(b, t, 10).to_record())

# r*D does reach everything we sample.
v = check_covers(b, [Fraction(2, 3), Fraction(7), Fraction(110, 3)])
print("covering levels (x, least k, guided k):", v.details)

# D is unbounded: its state value passes any threshold.
D = interval_D(b)
print("D starts at e_%d;" % D.start, "first generators", [str(D.generator(n)) for n in (1, 2, 3)])
print(intervals.state_sup_probe(D, 1, 10 ** 6).to_record())
print(intervals.is_soft(D, 6).details)
