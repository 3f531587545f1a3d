"""Countably generated intervals presented by monotone generator sequences.

An interval is never stored as a set.  It is a rule ``n -> y_n`` with
``y_n <= y_{n+1}`` inside some ambient positive cone, and every question about
it is answered from a finite prefix of the sequence plus the ambient
positivity oracle.  Answers that only cover a prefix say so.

An ambient is any object with ``positive(x)``, ``add``, ``sub``, ``scale``,
``state(x, u)`` and ``zero``.  Three kinds occur: a rational block monoid,
a directed system of simple components, and a single simple component.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

STATUSES = ("proved", "refuted", "verified_to_bound", "skipped")


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of a claim; ``skipped`` marks work not attempted."""

    claim: str
    status: str
    bound: int | None = None
    witness: object = None
    note: str = ""
    details: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "refuted" and self.witness is None:
            raise ValueError("a refutation needs a witness")
        if self.status == "verified_to_bound" and self.bound is None:
            raise ValueError("a bounded verification needs its bound")

    @property
    def ok(self) -> bool:
        return self.status != "refuted"

    def to_record(self) -> dict:
        return {
            "claim": self.claim,
            "status": self.status,
            "bound": self.bound,
            "witness": None if self.witness is None else str(self.witness),
            "note": self.note,
        }


class Component:
    """A single simple component ``(Z, cone)`` used as an ambient."""

    zero = 0

    def __init__(self, cone):
        self.cone = cone

    def positive(self, x: int) -> bool:
        return x >= 0 and self.cone.contains(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def scale(self, t, x):
        return t * x

    def equal(self, x, y) -> bool:
        return x == y

    def state(self, x, u) -> Fraction:
        if u <= 0:
            raise ValueError(f"{u} is not a positive element")
        return Fraction(x, u)

    def __eq__(self, other):
        return isinstance(other, Component) and other.cone == self.cone

    def __hash__(self):
        return hash(self.cone)


class Interval:
    """The interval ``<y_n>`` generated by ``generator(n)`` for ``n >= start``.

    Generators are materialised once, in order, and each new one is checked
    to be positive and to dominate its predecessor.
    """

    def __init__(self, ambient, generator: Callable[[int], object], start: int = 0,
                 name: str = "X", check: bool = True):
        self.ambient = ambient
        self._rule = generator
        self.start = start
        self.name = name
        self._check = check
        self._gens: list = []
        self._lock = threading.Lock()

    @property
    def materialized(self) -> int:
        return len(self._gens)

    def generator(self, n: int):
        if n < self.start:
            raise IndexError(f"{self.name} starts at index {self.start}")
        k = n - self.start
        if k >= len(self._gens):
            with self._lock:
                while len(self._gens) <= k:
                    idx = self.start + len(self._gens)
                    y = self._rule(idx)
                    if self._check:
                        amb = self.ambient
                        if not amb.positive(y):
                            raise ValueError(f"generator {idx} of {self.name} is not positive: {y}")
                        if self._gens and not amb.positive(amb.sub(y, self._gens[-1])):
                            raise ValueError(f"generators {idx - 1}, {idx} of {self.name} are not increasing")
                    self._gens.append(y)
        return self._gens[k]

    __getitem__ = generator

    def __repr__(self) -> str:
        return f"Interval({self.name}, start={self.start})"


def constant(ambient, u, name: str = "[0,u]") -> Interval:
    return Interval(ambient, lambda n: u, 0, name)


def sum(X: Interval, Y: Interval) -> Interval:  # noqa: A001 - mirrors the operation name
    """``X + Y``, generated by the sums of generators with equal index."""
    if X.ambient is not Y.ambient and X.ambient != Y.ambient:
        raise ValueError("intervals live in different ambients")
    amb = X.ambient
    return Interval(amb, lambda n: amb.add(X.generator(n), Y.generator(n)),
                    max(X.start, Y.start), f"({X.name}+{Y.name})")


def scale(t: int, X: Interval) -> Interval:
    if t < 1:
        raise ValueError(f"scale factor must be at least 1, got {t}")
    amb = X.ambient
    return Interval(amb, lambda n: amb.scale(t, X.generator(n)), X.start, f"{t}{X.name}")


def contains_up_to(X: Interval, x, n_bound: int) -> Verdict:
    """Search ``x <= y_n`` for ``n <= n_bound``."""
    amb = X.ambient
    if not amb.positive(x):
        raise ValueError(f"{x} is not in the ambient positive cone")
    for n in range(X.start, n_bound + 1):
        if amb.positive(amb.sub(X.generator(n), x)):
            return Verdict(f"{x} in {X.name}", "proved", witness=n,
                           note=f"{x} <= generator {n}")
    return Verdict(f"{x} not in {X.name}", "verified_to_bound", bound=n_bound,
                   note=f"no generator up to index {n_bound} dominates {x}")


def pushforward(f, X: Interval) -> Interval:
    """Image interval along a verified order-embedding ``f``.

    ``f`` needs ``apply(x)``, ``target`` (an ambient) and ``verified``.
    """
    if not getattr(f, "verified", False):
        raise ValueError("pushforward needs a verified order-embedding")
    return Interval(f.target, lambda n: f.apply(X.generator(n)), X.start, f"f({X.name})")


def is_soft(X: Interval, bound: int) -> Verdict:
    """For each generator ``x = y_i`` with ``i < bound`` look for ``(n+1)x <= n*y_k``, ``n, k <= bound``.

    Softness of every generator passes to everything they dominate, so a full
    pass covers all members below generator ``bound``.
    """
    amb = X.ambient
    found = []
    for i in range(X.start, max(bound, X.start + 1)):
        x = X.generator(i)
        if amb.equal(x, amb.zero):
            found.append((i, 1, i))
            continue
        hit = None
        for k in range(X.start, bound + 1):
            y = X.generator(k)
            for n in range(1, bound + 1):
                if amb.positive(amb.sub(amb.scale(n, y), amb.scale(n + 1, x))):
                    hit = (i, n, k)
                    break
            if hit:
                break
        if hit is None:
            return Verdict(f"{X.name} not soft at generator {i}", "verified_to_bound",
                           bound=bound, witness=i,
                           note=f"no (n, y_k) with n, k <= {bound} satisfies (n+1)x <= n*y_k",
                           details=tuple(found))
        found.append(hit)
    return Verdict(f"{X.name} soft below generator {bound}", "verified_to_bound", bound=bound,
                   note="(generator, n, k) triples in details", details=tuple(found))


def state_sup_probe(X: Interval, u, threshold, bound: int = 1000) -> Verdict:
    """Least ``n`` with ``s(y_n) > threshold`` for the state ``s`` normalised at ``u``."""
    amb = X.ambient
    threshold = Fraction(threshold)
    for n in range(X.start, bound + 1):
        if amb.state(X.generator(n), u) > threshold:
            return Verdict(f"sup s({X.name}) > {threshold}", "proved", witness=n,
                           note=f"s(generator {n}) exceeds the threshold")
    return Verdict(f"sup s({X.name}) <= {threshold}", "verified_to_bound", bound=bound,
                   note=f"state stays below threshold up to generator {bound}")
