"""Slow, obviously-correct reference computations used to freeze expected values.

Nothing here imports the package; each routine is a direct search over
small ranges.
"""

import math
from fractions import Fraction
from itertools import product


def members(gens, n):
    """Reachability table on ``0..n`` for sums of ``gens``."""
    r = [False] * (n + 1)
    r[0] = True
    for x in range(1, n + 1):
        r[x] = any(g <= x and r[x - g] for g in gens)
    return r


def conductor(gens, limit=20000):
    """Least ``N`` with ``N..N+min(gens)-1`` all members and ``N-1`` not (gcd 1 assumed)."""
    m = min(gens)
    tab = members(gens, limit)
    run = 0
    for x in range(limit + 1):
        run = run + 1 if tab[x] else 0
        if run == m:
            return x - m + 1
    raise RuntimeError("limit too small")


def gaps(gens, limit=20000):
    n = conductor(gens, limit)
    tab = members(gens, n)
    return [x for x in range(n) if not tab[x]]


def minimal_generators(gens):
    out = []
    for g in sorted(set(gens)):
        if not members([h for h in out], g)[g] or g == 0:
            out.append(g)
    return out


def block_members(q, p, s, r, depth, bound=100):
    """Members of ``M`` with denominator dividing ``r**(depth+1)``.

    Returns ``(scale, table)``: ``x <= bound`` is a member iff ``table[x*scale]``.
    Complete only when no level past ``depth`` fits below ``bound``.
    """
    if Fraction(s, r) ** (depth + 1) <= bound:
        raise ValueError("depth too small: higher levels fit below the bound")
    scale = r ** (depth + 1)
    top = bound * scale + 1
    gens = [q * r ** depth, (p - q) * r ** depth]
    l = 1
    while True:
        lvl = [k * s ** l * r ** (depth - l) for k in (r, s - r)] if l <= depth else []
        if not lvl or min(lvl) > top:
            break
        gens += lvl
        l += 1
    return scale, BitTable(member_bits(gens, top), top)


def pcd_search(a, N, p_top=200, c_top=400):
    """Lexicographically least ``(p, c, d)`` by plain enumeration."""
    for p in range(N + 1, p_top):
        if math.gcd(p, a) != 1:
            continue
        for c in range(1, c_top):
            if math.gcd(a, c) != 1 or (p * c) % a != 1 % a or p * c <= a * N:
                continue
            lo = max((a - 1) * p * c + a * (N - 1), a * c)
            for d in range(lo + 1, lo + 1 + a * a * 50):
                if (p * d) % a == 1 % a and math.gcd(c, d) == 1:
                    return p, c, d
    raise RuntimeError("search range too small")


def embeds(m, src, tgt):
    """``x in src <=> m*x in tgt`` for all ``x`` up to twice the larger conductor."""
    top = 2 * max(conductor(src), conductor(tgt))
    s = members(src, top)
    t = members(tgt, m * top)
    return all(s[x] == t[m * x] for x in range(top + 1))


def supernatural_contains(exps, x):
    """``x`` in ``Z_n`` for ``n`` given as ``{prime: exponent}`` with ``math.inf`` allowed."""
    x = Fraction(x)
    d = x.denominator
    for prime in range(2, d + 1):
        e = 0
        while d % prime == 0:
            d //= prime
            e += 1
        if e > exps.get(prime, 0):
            return False
    return d == 1


def small_sums(values, max_terms):
    """All sums of at most ``max_terms`` entries of ``values`` (with repetition)."""
    out = {0}
    for k in range(1, max_terms + 1):
        for combo in product(values, repeat=k):
            out.add(sum(combo))
    return out


def member_bits(gens, n):
    """Members of ``<gens>`` up to ``n`` as the set bits of one Python integer."""
    mask = (1 << (n + 1)) - 1
    r = 1
    for g in gens:
        step = g
        while step <= n:
            r |= (r << step) & mask
            step *= 2
    return r


class BitTable:
    """Read-only boolean view of a bitmask, indexable like a list."""

    def __init__(self, bits, n):
        self.bits, self.n = bits, n

    def __len__(self):
        return self.n + 1

    def __getitem__(self, i):
        if not 0 <= i <= self.n:
            raise IndexError(i)
        return bool(self.bits >> i & 1)
