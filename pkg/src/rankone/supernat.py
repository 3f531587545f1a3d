"""Generalized integers (supernatural numbers) and the subgroups of Q they define.

A supernatural number is a formal product ``prod p**e_p`` over the primes with
each exponent in ``{0, 1, 2, ..., inf}``.  Only finitely many primes may carry a
nonzero exponent here; ``INF`` marks an infinite exponent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from sympy import factorint, isprime

INF = math.inf

Exponent = Union[int, float]


def _check_exponent(p: int, e) -> Exponent:
    if e == INF:
        return INF
    if isinstance(e, bool) or not isinstance(e, int) or e < 0:
        raise ValueError(f"exponent of {p} must be a non-negative int or INF, got {e!r}")
    return e


@dataclass(frozen=True)
class Supernatural:
    """Immutable supernatural number in canonical form (no zero exponents)."""

    exponents: tuple = field(default=())

    def __init__(self, exponents: Mapping[int, Exponent] | None = None,
                 infinite_support: Iterable[int] = ()):
        canon: dict[int, Exponent] = {}
        for p, e in dict(exponents or {}).items():
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            e = _check_exponent(p, e)
            if e:
                canon[int(p)] = e
        for p in infinite_support:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            canon[int(p)] = INF
        object.__setattr__(self, "exponents", tuple(sorted(canon.items())))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "Supernatural":
        if n < 1:
            raise ValueError("only positive integers are supernatural numbers")
        return cls(factorint(n))

    @classmethod
    def from_sequence(cls, prefix: Iterable[int],
                      infinite_support: Iterable[int] = ()) -> "Supernatural":
        """Product of a finite prefix of a sequence of positive integers.

        Infinite exponents cannot be detected from finite data; declare them
        through ``infinite_support``.
        """
        out = cls(infinite_support=infinite_support)
        for a in prefix:
            out = out * cls.from_int(a)
        return out

    @classmethod
    def parse(cls, text: str) -> "Supernatural":
        """Parse ``"2^inf*3^2*5"``; ``"1"`` is the unit."""
        text = text.strip().replace(" ", "")
        if text == "1":
            return cls()
        exps: dict[int, Exponent] = {}
        for factor in text.split("*"):
            m = re.fullmatch(r"(\d+)(?:\^(\d+|inf))?", factor)
            if not m:
                raise ValueError(f"malformed factor {factor!r} in {text!r}")
            p = int(m.group(1))
            e: Exponent = 1 if m.group(2) is None else (
                INF if m.group(2) == "inf" else int(m.group(2)))
            if p in exps:
                raise ValueError(f"prime {p} repeated in {text!r}")
            exps[p] = e
        return cls(exps)

    # -- accessors ----------------------------------------------------------

    def __getitem__(self, p: int) -> Exponent:
        return dict(self.exponents).get(p, 0)

    @property
    def support(self) -> frozenset:
        return frozenset(p for p, _ in self.exponents)

    @property
    def infinite_support(self) -> frozenset:
        return frozenset(p for p, e in self.exponents if e == INF)

    @property
    def is_finite(self) -> bool:
        return not self.infinite_support

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not a finite integer")
        return math.prod(p ** e for p, e in self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for p, e in self.exponents:
            if e == 1:
                parts.append(str(p))
            else:
                parts.append(f"{p}^{'inf' if e == INF else e}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Supernatural({str(self)!r})"

    # -- arithmetic ---------------------------------------------------------

    def __mul__(self, other: "Supernatural") -> "Supernatural":
        if isinstance(other, int):
            other = Supernatural.from_int(other)
        out = dict(self.exponents)
        for p, e in other.exponents:
            out[p] = out.get(p, 0) + e
        return Supernatural(out)

    __rmul__ = __mul__


def mul(a: Supernatural, b: Supernatural) -> Supernatural:
    return a * b


def divides(a: Supernatural, b: Supernatural) -> bool:
    """``a | b``: every exponent of ``a`` is at most the matching exponent of ``b``."""
    return all(e <= b[p] for p, e in a.exponents)


def coprime(a: Supernatural, b: Supernatural) -> bool:
    return not (a.support & b.support)


def subgroup_contains(n: Supernatural, x) -> bool:
    """Membership of the rational ``x`` in Z_n = {a/b : b divides n}."""
    den = Fraction(x).denominator
    if den == 1:
        return True
    return all(e <= n[p] for p, e in factorint(den).items())
