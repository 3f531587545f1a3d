"""Finitely generated submonoids of the non-negative integers.

These are the positive cones of the simple components ``(Z, H+)`` that every
group in this package is built from.  Membership is read off the Apery table
with respect to the smallest generator ``m``: ``w[j]`` is the least member
congruent to ``j`` mod ``m``, and ``x`` is a member iff ``x >= w[x % m]``.
The table costs ``O(m)`` per generator however large the conductor is.  A
block-wise reachability sweep is kept for cones whose ``m`` is too large
for a table.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence, Union

import numpy as np

# cones whose smallest (reduced) generator exceeds this use the sweep instead
APERY_LIMIT = 20_000_000
_BIG = 1 << 62


def apery_set(gens: Sequence[int]) -> np.ndarray:
    """Apery table of ``<gens>`` (gcd 1) with respect to its smallest generator.

    Round-robin: adding a generator ``a`` splits the residues mod ``m`` into
    ``gcd(a, m)`` cycles ``j, j+a, j+2a, ...``; along each cycle the new value
    is a running minimum of ``w[t] + (steps from t) * a``, which one pass over
    the doubled cycle computes.
    """
    gens = sorted(set(int(g) for g in gens))
    m = gens[0]
    if reduce(math.gcd, gens) != 1:
        raise ValueError("Apery table needs generators with gcd 1")
    # int64 while every intermediate value provably stays below 2**62
    inf = _BIG
    w = np.full(m, inf, dtype=np.int64)
    w[0] = 0
    top = 0
    for a in gens[1:]:
        d = math.gcd(a, m)
        L = m // d
        if w.dtype != object and top + 2 * m * a >= _BIG // 2:
            big = 1 << (2 * (top + 2 * m * max(gens)).bit_length() + 8)
            w = w.astype(object)
            w[w >= inf] = big
            inf = big
        steps = np.arange(2 * L, dtype=np.int64)
        idx = (np.arange(d)[:, None] + (a % m) * steps[None, :]) % m
        offs = steps.astype(w.dtype) * a
        u = w[idx] - offs
        best = np.minimum.accumulate(u, axis=1) + offs
        w[idx[:, L:]] = np.minimum(best[:, L:], inf)
        finite = w[w < inf]
        top = int(finite.max())
    return w


class _Sweep:
    """Reachability bitmap for a cone whose generators have gcd 1."""

    def __init__(self, gens: Sequence[int]):
        self.gens = tuple(gens)
        self.m = self.gens[0]
        self.bits = np.zeros(max(4 * self.m, 1 << 12), dtype=bool)
        self.bits[0] = True
        self.n = self.m  # bits[:n] are final
        self.conductor: int | None = None
        self._lock = threading.Lock()

    def _grow(self, need: int) -> None:
        cap = len(self.bits)
        while cap < need:
            cap *= 2
        if cap != len(self.bits):
            new = np.zeros(cap, dtype=bool)
            new[: self.n] = self.bits[: self.n]
            self.bits = new

    def extend(self, upto: float) -> None:
        """Make ``bits`` final on ``[0, upto]`` or stop once the conductor is known."""
        if self.conductor is not None or self.n > upto:
            return
        with self._lock:
            m, bits = self.m, self.bits
            while self.conductor is None and self.n <= upto:
                n = self.n
                if n + m > len(bits):
                    self._grow(n + m)
                    bits = self.bits
                block = bits[n : n + m]
                for g in self.gens:
                    lo = n - g
                    if lo >= 0:
                        block |= bits[lo : lo + m]
                    elif lo + m > 0:
                        block[-lo:] |= bits[0 : lo + m]
                    else:
                        break  # generators are sorted; the rest are larger still
                self.n = n + m
                if block.all():
                    holes = np.flatnonzero(~bits[: self.n])
                    self.conductor = int(holes[-1]) + 1 if len(holes) else 0

    def member(self, x: int) -> bool:
        if self.conductor is not None and x >= self.conductor:
            return True
        self.extend(x)
        if self.conductor is not None and x >= self.conductor:
            return True
        return bool(self.bits[x])

    def run(self) -> int:
        self.extend(math.inf)
        return self.conductor


def _as_generators(gens: Iterable[int]) -> tuple:
    out = sorted({int(g) for g in gens})
    if not out:
        raise ValueError("a cone needs at least one generator")
    if out[0] <= 0:
        raise ValueError(f"generators must be positive, got {out[0]}")
    return tuple(out)


class IntegerCone:
    """The submonoid ``<g1, ..., gk>`` of the non-negative integers.

    Two cones compare equal when they denote the same set, i.e. when their
    minimal generating sets agree.
    """

    def __init__(self, generators: Iterable[int]):
        self.generators = _as_generators(generators)

    # -- structure ----------------------------------------------------------

    @cached_property
    def gcd(self) -> int:
        return reduce(math.gcd, self.generators)

    @property
    def is_simple(self) -> bool:
        return self.gcd == 1

    @property
    def min_generator(self) -> int:
        return self.generators[0]

    @cached_property
    def _sweep(self) -> _Sweep:
        d = self.gcd
        return _Sweep([g // d for g in self.generators])

    @cached_property
    def apery(self) -> np.ndarray | None:
        """Apery table of the reduced cone ``<g/gcd>``, or ``None`` when too large."""
        d = self.gcd
        red = [g // d for g in self.generators]
        if red[0] > APERY_LIMIT:
            return None
        return apery_set(red)

    def contains(self, x: int) -> bool:
        if x < 0:
            raise ValueError(f"membership is only defined for x >= 0, got {x}")
        d = self.gcd
        if x % d:
            return False
        y = x // d
        w = self.apery
        if w is None:
            return self._sweep.member(y)
        return bool(y >= w[y % len(w)])

    __contains__ = contains

    @cached_property
    def conductor(self) -> int | None:
        """Least ``N`` with ``N-1`` outside the cone and ``[N, oo)`` inside; ``None`` if gcd > 1."""
        if not self.is_simple:
            return None
        w = self.apery
        if w is None:
            return self._sweep.run()
        return int(w.max()) - len(w) + 1

    @cached_property
    def gap_count(self) -> int | None:
        if not self.is_simple:
            return None
        w = self.apery
        if w is None:
            return len(self.gap_array())
        m = len(w)
        return int(((w - np.arange(m)) // m).sum())

    @cached_property
    def gaps(self) -> tuple | None:
        if not self.is_simple:
            return None
        return tuple(int(x) for x in self.gap_array())

    def gap_array(self) -> np.ndarray:
        """Gaps as a sorted integer array (cheap for large gap sets)."""
        if not self.is_simple:
            raise ValueError(f"{self} is not simple; its gap set is infinite")
        w = self.apery
        if w is None:
            n = self.conductor  # runs the sweep, which may reallocate the bitmap
            return np.flatnonzero(~self._sweep.bits[:n])
        m = len(w)
        rho = np.arange(m)
        counts = ((w - rho) // m).astype(np.int64)
        total = int(counts.sum())
        first = np.repeat(rho, counts)
        offset = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        return np.sort(first + m * offset)

    def member_array(self, upto: int) -> np.ndarray:
        """Boolean membership of ``0..upto`` as one array."""
        out = np.zeros(upto + 1, dtype=bool)
        d = self.gcd
        top = upto // d
        w = self.apery
        if w is None:
            sw = self._sweep
            sw.extend(top)
            lim = top if sw.conductor is None else min(top, sw.conductor - 1)
            reduced = np.ones(top + 1, dtype=bool)
            if lim >= 0:
                reduced[: lim + 1] = sw.bits[: lim + 1]
        else:
            y = np.arange(top + 1)
            reduced = y >= w[y % len(w)]
        out[::d] = reduced[: len(out[::d])]
        return out

    @cached_property
    def minimal_generators(self) -> tuple:
        """Generators not expressible through the others (unique for the cone)."""
        keep = []
        for g in self.generators:
            if not any(h < g and self.contains(g - h) for h in self.generators):
                keep.append(g)
        return tuple(keep)

    def scaled(self, k: int) -> "IntegerCone":
        return IntegerCone(k * g for g in self.generators)

    def flatten(self) -> "IntegerCone":
        return self

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LayeredCone):
            other = other.flatten()
        if not isinstance(other, IntegerCone):
            return NotImplemented
        return self.minimal_generators == other.minimal_generators

    def __hash__(self) -> int:
        return hash(self.minimal_generators)

    def __str__(self) -> str:
        return "<" + ",".join(map(str, self.generators)) + ">"

    def __repr__(self) -> str:
        return f"IntegerCone({list(self.generators)})"


@dataclass(frozen=True)
class ConeProfile:
    minimal_generators: tuple
    conductor: int | None
    gap_set: tuple | None
    is_simple: bool

    def to_json(self) -> dict:
        return {
            "minimal_generators": list(self.minimal_generators),
            "conductor": self.conductor,
            "gaps": None if self.gap_set is None else list(self.gap_set),
            "is_simple": self.is_simple,
        }


class LayeredCone:
    """``a*inner + p*cd`` kept in factored form.

    Membership recurses into ``inner`` instead of expanding the generators, so
    deep towers of extensions stay decidable for large arguments.
    """

    def __init__(self, a: int, inner: "Cone", p: int, cd: IntegerCone,
                 conductor_hint: int | None = None):
        if a <= 0 or p <= 0:
            raise ValueError("multipliers of a layered cone must be positive")
        self.a, self.inner, self.p, self.cd = a, inner, p, cd
        self.conductor_hint = conductor_hint

    @cached_property
    def depth(self) -> int:
        return 1 + (self.inner.depth if isinstance(self.inner, LayeredCone) else 0)

    @cached_property
    def _flat(self) -> IntegerCone:
        gens = [self.a * g for g in self.inner.generators]
        gens += [self.p * g for g in self.cd.generators]
        return IntegerCone(gens)

    def flatten(self) -> IntegerCone:
        return self._flat

    @property
    def generators(self) -> tuple:
        return self._flat.generators

    @property
    def gcd(self) -> int:
        return self._flat.gcd

    @property
    def is_simple(self) -> bool:
        return self.gcd == 1

    @property
    def min_generator(self) -> int:
        return self._flat.min_generator

    @property
    def minimal_generators(self) -> tuple:
        return self._flat.minimal_generators

    def _contains_raw(self, x: int) -> bool:
        a, p = self.a, self.p
        g = math.gcd(a, p)
        if x % g:
            return False
        step = a // g
        # x - p*w must be divisible by a  <=>  w = w0 (mod a/g)
        w0 = ((x // g) * pow(p // g, -1, step)) % step if step > 1 else 0
        inner = self.inner
        n_in = inner.conductor if inner.is_simple else None
        for w in range(w0, x // p + 1, step):
            if not self.cd.contains(w):
                continue
            y = (x - p * w) // a
            if n_in is not None and y >= n_in:
                return True
            if inner.contains(y):
                return True
        return False

    def contains(self, x: int) -> bool:
        if x < 0:
            raise ValueError(f"membership is only defined for x >= 0, got {x}")
        n = self.__dict__.get("conductor")
        if n is not None and x >= n:
            return True
        return self._contains_raw(x)

    __contains__ = contains

    def scan_conductor(self, limit: int | None = None) -> int:
        """Conductor found by walking upward with the recursive oracle.

        Stops at the first run of ``min_generator`` consecutive members; every
        larger integer is then a member as well.
        """
        if not self.is_simple:
            raise ValueError(f"{self} is not simple")
        m = self.min_generator
        run, x = 0, 0
        while run < m:
            if limit is not None and x > limit:
                raise RuntimeError(f"no conductor found below {limit}")
            run = run + 1 if self._contains_raw(x) else 0
            x += 1
        return x - m

    def certify_conductor(self, n: int) -> bool:
        """``n-1`` outside and ``[n, n+m)`` inside: together they pin the conductor."""
        if n > 0 and self._contains_raw(n - 1):
            return False
        return all(self._contains_raw(n + k) for k in range(self.min_generator))

    @cached_property
    def conductor(self) -> int | None:
        if not self.is_simple:
            return None
        if self.conductor_hint is not None:
            if not self.certify_conductor(self.conductor_hint):
                raise ValueError(f"conductor hint {self.conductor_hint} rejected for {self}")
            return self.conductor_hint
        return self._flat.conductor

    @property
    def apery(self) -> np.ndarray | None:
        return self._flat.apery

    @property
    def gap_count(self) -> int | None:
        return self._flat.gap_count

    @property
    def gaps(self) -> tuple | None:
        return self._flat.gaps

    def gap_array(self) -> np.ndarray:
        return self._flat.gap_array()

    def __eq__(self, other) -> bool:
        if isinstance(other, (IntegerCone, LayeredCone)):
            return self._flat == other.flatten()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._flat)

    def __str__(self) -> str:
        inner = str(self.inner)
        if isinstance(self.inner, LayeredCone):
            inner = f"({inner})"
        return f"{self.a}*{inner}+{self.p}*{self.cd}"

    def __repr__(self) -> str:
        return f"LayeredCone({self})"


Cone = Union[IntegerCone, LayeredCone]


# -- textual forms ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[<>(),*+])")


def _tokens(text: str) -> list:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_cone(text: str) -> Cone:
    """Parse ``"<2,5>"`` or ``"5*<2,5>+6*<6,161>"`` (nesting via parentheses)."""
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'} at token {pos} in {text!r}, got {tok!r}")
        pos += 1
        return tok

    def number():
        tok = take()
        if not tok.isdigit():
            raise ValueError(f"expected a number in {text!r}, got {tok!r}")
        return int(tok)

    def flat():
        take("<")
        gens = [number()]
        while peek() == ",":
            take(",")
            gens.append(number())
        take(">")
        return IntegerCone(gens)

    def atom():
        if peek() == "(":
            take("(")
            c = expr()
            take(")")
            return c
        return flat()

    def expr():
        if peek() in ("<", "("):
            return atom()
        a = number()
        take("*")
        inner = atom()
        take("+")
        p = number()
        take("*")
        return LayeredCone(a, inner, p, flat())

    cone = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input after cone in {text!r}")
    return cone


# -- operations -------------------------------------------------------------

def contains(cone: Cone, x: int) -> bool:
    return cone.contains(x)


def is_simple_component(cone: Cone) -> bool:
    return cone.gcd == 1


def analyze(cone: Cone) -> ConeProfile:
    if isinstance(cone, LayeredCone):
        cone = cone.flatten()
    if not cone.is_simple:
        return ConeProfile(cone.minimal_generators, None, None, False)
    return ConeProfile(cone.minimal_generators, cone.conductor, cone.gaps, True)


def combine(a: int, h: Cone, b: int, k: Cone) -> IntegerCone:
    """The cone ``a*H + b*K``, generated by the scaled generators, minimised."""
    if a < 1 or b < 1:
        raise ValueError("combine needs positive multipliers")
    gens = [a * g for g in h.generators] + [b * g for g in k.generators]
    full = IntegerCone(gens)
    out = IntegerCone(full.minimal_generators)
    if "apery" in full.__dict__:
        out.__dict__["apery"] = full.apery  # same set, same table
    return out


def intersect_scale(cones: Sequence[Cone], L: int = 1) -> IntegerCone:
    """The semigroup ``(1/L) * (intersection of cones)  cap  Z``."""
    if not cones:
        raise ValueError("need at least one cone")
    if L < 1:
        raise ValueError("L must be positive")
    for c in cones:
        if not c.is_simple:
            raise ValueError(f"{c} is not a simple component")
        bad = [g for g in c.generators if math.gcd(g, L) != 1]
        if bad:
            raise ValueError(f"L={L} shares a factor with generators {bad} of {c}")
    top = max(c.conductor for c in cones)
    # every y with L*y >= top lies in S; members up to conductor + multiplicity
    # contain all minimal generators
    bound = -(-top // L)
    limit = 2 * bound + 2
    member = np.ones(limit + 1, dtype=bool)
    for c in cones:
        member &= c.flatten().member_array(L * limit)[::L]
    members = np.flatnonzero(member[1:]) + 1
    mult = int(members[0])
    gens = [int(y) for y in members if y <= bound + mult]
    return IntegerCone(IntegerCone(gens).minimal_generators)


def state_value(cone: Cone, u: int, x: int) -> Fraction:
    """The unique state on ``(Z, cone)`` normalised at ``u``, evaluated at ``x``."""
    if u == 0:
        raise ValueError("the order-unit must be nonzero")
    if u < 0 or not cone.contains(u):
        raise ValueError(f"{u} is not in {cone}")
    return Fraction(x, u)
