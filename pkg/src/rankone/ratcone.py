"""The rational block monoid ``M`` built from data ``(q, p, s, r)``.

``M`` is the submonoid of the non-negative rationals generated by ``k/r``
with ``k`` in ``A = <q, p-q>`` and ``(k'/r)(s/r)**l`` with ``k'`` in
``B = <r, s-r>``, ``l >= 1``.  Two membership procedures are provided and kept
independent on purpose:

* ``contains_direct`` clears denominators and peels off one level at a time,
  choosing the level coefficient from its residue mod ``r``;
* ``contains_ladder`` moves ``x`` into the integer ladder
  ``G_i = r*G_{i-1} + s**i * B`` and asks the simple component there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from sympy import primefactors

from .embed import DirectedSystem, LimitElement, build_row
from .intcone import IntegerCone
from .intervals import Interval, Verdict


def as_fraction(x) -> Fraction:
    """Parse ``"a/b"`` strings, ints and Fractions exactly (no floats)."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Fraction(x)


@dataclass(frozen=True)
class BlockParams:
    q: int
    p: int
    s: int
    r: int

    def violations(self) -> list:
        q, p, s, r = self.q, self.p, self.s, self.r
        out = []
        if not 1 < q:
            out.append(f"q > 1 fails (q={q})")
        if not q < p - q:
            out.append(f"q < p-q fails ({q} >= {p - q})")
        if math.gcd(q, p) != 1:
            out.append(f"gcd(q,p) != 1 (gcd({q},{p}) = {math.gcd(q, p)})")
        if not out and (s <= 0 or not IntegerCone([q, p - q]).contains(s)):
            out.append(f"s not in A (s={s}, A=<{q},{p - q}>)")
        if not 1 < r:
            out.append(f"r > 1 fails (r={r})")
        if not r < s - r:
            out.append(f"r < s-r fails ({r} >= {s - r})")
        if math.gcd(r, s) != 1:
            out.append(f"gcd(r,s) != 1 (gcd({r},{s}) = {math.gcd(r, s)})")
        return out


class Block:
    """The monoid ``M`` with its cones ``A``, ``B`` and the integer ladder."""

    def __init__(self, params: BlockParams):
        bad = params.violations()
        if bad:
            raise ValueError("invalid block parameters: " + "; ".join(bad))
        self.params = params
        self.q, self.p, self.s, self.r = params.q, params.p, params.s, params.r
        self.A = IntegerCone([self.q, self.p - self.q])
        self.B = IntegerCone([self.r, self.s - self.r])
        self._r_primes = frozenset(primefactors(self.r))
        self._memo = lru_cache(maxsize=None)(self._level)

    def __repr__(self) -> str:
        return f"Block(q={self.q}, p={self.p}, s={self.s}, r={self.r})"

    @cached_property
    def ladder(self) -> DirectedSystem:
        return build_row(self.A, self.B, self.r, self.s)

    def e(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("e_n needs n >= 0")
        return Fraction(self.s, self.r) ** n

    def in_group(self, x) -> bool:
        """Denominator a product of primes dividing ``r``."""
        den = as_fraction(x).denominator
        return all(p in self._r_primes for p in primefactors(den))

    # -- membership: level-by-level search -------------------------------------

    def _level(self, X: int, l: int):
        """Decompose ``X = k*r**l + sum_{j<=l} k_j * s**j * r**(l-j)``; ``None`` if impossible."""
        if l == 0:
            return (X,) if self.A.contains(X) else None
        r, sl = self.r, self.s ** l
        # every term but the top one is a multiple of r
        c = (X * pow(self.s, -l, r)) % r
        for k in range(c, X // sl + 1, r):
            if k and not self.B.contains(k):
                continue
            rest = self._memo((X - k * sl) // r, l - 1)
            if rest is not None:
                return rest + (k,)
        return None

    def decompose(self, x):
        """``(k, k_1, ..., k_L)`` with ``x = k/r + sum (k_l/r)(s/r)**l``, or ``None``."""
        x = as_fraction(x)
        if x < 0:
            raise ValueError(f"membership is only defined for x >= 0, got {x}")
        if not self.in_group(x):
            return None
        r, s = self.r, self.s
        # a nonzero level-l term is at least (s/r)**l, so levels stop at L
        L = 0
        while s ** (L + 1) * x.denominator <= x.numerator * r ** (L + 1):
            L += 1
        X = x * r ** (L + 1)
        if X.denominator != 1:
            return None
        return self._memo(int(X), L)

    def contains_direct(self, x) -> bool:
        return self.decompose(x) is not None

    # -- membership: ladder ----------------------------------------------------

    def ladder_index(self, x) -> LimitElement:
        """Least ``i`` with ``r**(i+1) * x`` integral, as a ladder element."""
        x = as_fraction(x)
        if not self.in_group(x):
            raise ValueError(f"{x} is not in the group generated by M")
        i, v = 0, x * self.r
        while v.denominator != 1:
            v *= self.r
            i += 1
        return LimitElement(i, int(v))

    def from_ladder(self, e: LimitElement) -> Fraction:
        return Fraction(e.value, self.r ** (e.stage + 1))

    def contains_ladder(self, x) -> bool:
        x = as_fraction(x)
        if x < 0:
            raise ValueError(f"membership is only defined for x >= 0, got {x}")
        if not self.in_group(x):
            return False
        e = self.ladder_index(x)
        lad = self.ladder
        lad.extend_to(e.stage)
        if not lad.verified:
            raise RuntimeError(f"{self}: ladder map {lad.poisoned[0]} is not an order-embedding")
        return lad.stage(e.stage).contains(e.value)

    # -- ambient interface for intervals -----------------------------------------

    zero = Fraction(0)

    def positive(self, x) -> bool:
        x = as_fraction(x)
        return x >= 0 and self.contains_direct(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def scale(self, t, x):
        return t * x

    def equal(self, x, y) -> bool:
        return x == y

    def le(self, x, y) -> bool:
        return self.positive(as_fraction(y) - as_fraction(x))

    def state(self, x, u) -> Fraction:
        """Value of the state normalised at ``u``: every state is ``x -> x/u``."""
        u = as_fraction(u)
        if u <= 0 or not self.in_group(u):
            raise ValueError(f"{u} cannot serve as a normalising element")
        return as_fraction(x) / u

    @property
    def D_start(self) -> int:
        """First index ``n`` with ``e_n`` in ``M`` (``e_1 = s/r`` always is)."""
        return 0 if self.contains_direct(1) else 1


def new_block(q: int, p: int, s: int, r: int) -> Block:
    return Block(BlockParams(q, p, s, r))


def e(b: Block, n: int) -> Fraction:
    return b.e(n)


def contains_direct(b: Block, x) -> bool:
    return b.contains_direct(x)


def contains_ladder(b: Block, x) -> bool:
    return b.contains_ladder(x)


def interval_D(b: Block) -> Interval:
    """``D = <e_n>`` over ``M``; indices follow ``n`` and start where ``e_n`` is in ``M``."""
    return Interval(b, b.e, b.D_start, "D")


def check_not_multiple(b: Block, t: int, level_bound: int) -> Verdict:
    """``s`` is not below ``t*e_m`` for any ``m <= level_bound``."""
    if not 1 <= t <= b.r - 1:
        raise ValueError(f"t must satisfy 1 <= t <= r-1 = {b.r - 1}, got {t}")
    claim = f"s={b.s} not in {t}D"
    for m in range(level_bound + 1):
        diff = t * b.e(m) - b.s
        if diff >= 0 and b.contains_direct(diff):
            return Verdict(claim, "refuted", witness=m,
                           note=f"{t}e_{m} - s = {diff} decomposes as {b.decompose(diff)}")
    return Verdict(claim, "verified_to_bound", bound=level_bound,
                   note=f"{t}e_m - s outside M for m <= {level_bound}")


def covering_level(b: Block, x, cap: int = 64) -> tuple:
    """Levels ``k`` with ``x <= r*e_k``: the one the doubling bound predicts and the least one.

    Guided route: pick ``n`` with ``x <= n*e_1``; then ``n*e_1 <= 2**k e_1 <= r*e_k``
    once ``n < 2**k``.  Returns ``(guided_k, least_k)``; either may be ``None``.
    """
    x = as_fraction(x)
    r, e1 = b.r, b.e(1)
    start = b.D_start
    guided = None
    n0 = max(1, math.ceil(x / e1))
    for n in range(n0, n0 + cap):
        if b.le(x, n * e1):
            k = max(start, n.bit_length())  # least k with n < 2**k
            if b.le(x, r * b.e(k)):
                guided = k
            break
    top = guided if guided is not None else start + cap
    least = next((k for k in range(start, top + 1) if b.le(x, r * b.e(k))), None)
    return guided, least


def check_covers(b: Block, samples) -> Verdict:
    """Every sample lies below some ``r*e_k``, i.e. in ``rD``."""
    rows = []
    for raw in samples:
        x = as_fraction(raw)
        if x < 0 or not b.contains_direct(x):
            raise ValueError(f"sample {x} is not in M")
        if x == 0:
            rows.append((str(x), 0, 0))
            continue
        guided, least = covering_level(b, x)
        if least is None:
            return Verdict(f"rD covers samples", "refuted", witness=str(x),
                           note="no covering level found by guided or exhaustive search",
                           details=tuple(rows))
        rows.append((str(x), least, guided))
    return Verdict(f"rD covers {len(rows)} samples", "proved", witness=None,
                   note="(x, least k, guided k) per sample in details", details=tuple(rows))
