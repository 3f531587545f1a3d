"""Multiplication maps between simple components and the diagrams they form.

A rank-one group here is always handed over as a directed system of simple
components ``(Z, G_i+)`` joined by multiplication maps.  When every map is an
order-embedding, an element of the limit is positive exactly when its
representative is positive at its own stage, so no limit is ever materialised.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .intcone import Cone, IntegerCone, combine

# beyond this many target integers the gap check falls back to per-element queries
_ARRAY_LIMIT = 50_000_000


@dataclass(frozen=True)
class EmbeddingCheck:
    """Outcome of an order-embedding decision.

    ``witness`` is the least ``x`` outside the source with ``m*x`` in the
    target; ``bound`` is the source conductor, past which nothing can fail.
    """

    embeds: bool
    witness: int | None
    bound: int

    def __bool__(self) -> bool:
        return self.embeds


class MultiplicationMap:
    """``x -> multiplier * x`` from ``(Z, source)`` to ``(Z, target)``; must be positive."""

    def __init__(self, multiplier: int, source: Cone, target: Cone):
        if multiplier < 1:
            raise ValueError(f"multiplier must be positive, got {multiplier}")
        bad = [g for g in source.generators if not target.contains(multiplier * g)]
        if bad:
            raise ValueError(
                f"x{multiplier} is not positive from {source} to {target}: "
                f"{multiplier}*{bad[0]} is not in the target")
        self.multiplier, self.source, self.target = multiplier, source, target
        self._check: EmbeddingCheck | None = None

    def check(self) -> EmbeddingCheck:
        if self._check is None:
            self._check = check_embedding(self)
        return self._check

    def __repr__(self) -> str:
        return f"MultiplicationMap({self.multiplier}: {self.source} -> {self.target})"


def _by_gaps(k: int, src, tgt) -> int | None:
    """Least source gap ``x`` with ``k*x`` in the target, scanning the gap list."""
    gaps = src.gap_array()
    if len(gaps) == 0:
        return None
    top = k * int(gaps[-1])
    if isinstance(tgt, IntegerCone) and top <= _ARRAY_LIMIT:
        idx = np.flatnonzero(tgt.member_array(top)[k * gaps])
        return int(gaps[idx[0]]) if len(idx) else None
    for x in gaps:
        if tgt.contains(k * int(x)):
            return int(x)
    return None


def _by_residues(k: int, src, tgt) -> int | None:
    """Same answer from the two Apery tables, one residue class at a time.

    ``S' = {y : k*y in target}`` contains the source, and is closed under
    adding the source multiplicity ``m``, so per class ``j`` mod ``m`` it is
    enough to find its least element and compare with the source table.  For
    ``y = j + (i + t*P)*m`` the target class of ``k*y`` depends on ``i`` only.
    """
    ws, wt = src.apery, tgt.apery
    m, t0 = len(ws), len(wt)
    P = t0 // math.gcd(k * m, t0)
    dtype = ws.dtype if ws.dtype == wt.dtype else object
    rho = np.arange(m).astype(dtype)
    period = P * m
    least = None
    for i in range(P):
        y = rho + i * m
        v = k * y
        need = wt[(v % t0).astype(np.int64)] - v
        t = np.maximum(-((-need) // (k * period)), 0)
        cand = y + t * period
        least = cand if least is None else np.minimum(least, cand)
    bad = least < ws
    if not bad.any():
        return None
    return int(least[bad].min())


def check_embedding(m: MultiplicationMap, method: str = "auto") -> EmbeddingCheck:
    """Exact order-embedding decision with a witness on failure.

    Positivity already sends the source cone into the target, so only the
    source gaps can break ``m*x in target => x in source``.  They all lie
    below the source conductor.  Two independent procedures answer this:
    ``"gaps"`` walks the gap list, ``"residues"`` compares Apery tables.
    ``"auto"`` picks the residue route whenever both tables exist and the
    class period is small.
    """
    src, tgt, k = m.source, m.target, m.multiplier
    if not (src.is_simple and tgt.is_simple):
        raise ValueError("order-embedding decision needs simple components on both sides")
    if method not in ("auto", "gaps", "residues"):
        raise ValueError(f"unknown method {method!r}")
    n_src = src.conductor
    tables = src.apery is not None and tgt.apery is not None
    if method == "residues" and not tables:
        raise ValueError("residue route needs Apery tables on both sides")
    if method == "auto":
        period = len(tgt.apery) // math.gcd(k * len(src.apery), len(tgt.apery)) if tables else 0
        method = "residues" if tables and period <= 4096 else "gaps"
    hit = _by_residues(k, src, tgt) if method == "residues" else _by_gaps(k, src, tgt)
    return EmbeddingCheck(hit is None, hit, n_src)


def is_order_embedding(m: MultiplicationMap) -> bool:
    return m.check().embeds


# -- directed systems -------------------------------------------------------

@dataclass(frozen=True)
class LimitElement:
    """The class of ``value`` at ``stage`` in the limit group."""

    stage: int
    value: int


class DirectedSystem:
    """Simple components ``stages[i]`` joined by ``x multipliers[i]``.

    ``extender(i, previous)`` returns ``(multiplier, next_cone)`` and lets the
    system grow on demand.  A system created with ``verify=True`` checks every
    map as it is materialised; a failed check poisons the system.
    """

    def __init__(self, stages: Sequence[Cone], multipliers: Sequence[int] = (),
                 extender: Callable | None = None, verify: bool = True):
        stages, multipliers = list(stages), list(multipliers)
        if not stages:
            raise ValueError("a directed system needs at least one stage")
        if len(multipliers) != len(stages) - 1:
            raise ValueError("need exactly one multiplier between consecutive stages")
        self._stages = stages
        self._mults = multipliers
        self._maps: list[MultiplicationMap] = []
        self.extender = extender
        self.checks: list[EmbeddingCheck] = []
        self.poisoned: tuple | None = None
        self._lock = threading.RLock()
        self._verify = verify
        for i, k in enumerate(multipliers):
            self._add_map(i, k)

    def _add_map(self, i: int, k: int) -> None:
        mp = MultiplicationMap(k, self._stages[i], self._stages[i + 1])
        self._maps.append(mp)
        if self._verify:
            res = mp.check()
            self.checks.append(res)
            if not res.embeds and self.poisoned is None:
                self.poisoned = (i, res.witness)

    @property
    def verified(self) -> bool:
        return self._verify and self.poisoned is None

    @property
    def truncation(self) -> int:
        """Index of the last materialised stage."""
        return len(self._stages) - 1

    def extend_to(self, i: int) -> None:
        if i <= self.truncation:
            return
        if self.extender is None:
            raise IndexError(f"stage {i} is beyond the materialised stages and there is no extender")
        with self._lock:
            while self.truncation < i:
                n = self.truncation
                k, nxt = self.extender(n + 1, self._stages[n])
                self._stages.append(nxt)
                self._mults.append(k)
                self._add_map(n, k)
        if self.poisoned is not None:
            raise RuntimeError(f"map {self.poisoned[0]} is not an order-embedding "
                               f"(witness {self.poisoned[1]})")

    def stage(self, i: int) -> Cone:
        self.extend_to(i)
        return self._stages[i]

    @property
    def stages(self) -> list:
        return list(self._stages)

    @property
    def multipliers(self) -> list:
        return list(self._mults)

    def multiplier(self, i: int) -> int:
        self.extend_to(i + 1)
        return self._mults[i]

    def map(self, i: int) -> MultiplicationMap:
        self.extend_to(i + 1)
        return self._maps[i]

    def product(self, i: int, j: int) -> int:
        """Multiplier of the composite map from stage ``i`` to stage ``j >= i``."""
        self.extend_to(j)
        return math.prod(self._mults[i:j])

    # -- the limit group ----------------------------------------------------

    zero = LimitElement(0, 0)

    def lift(self, e: LimitElement, j: int) -> LimitElement:
        if j < e.stage:
            raise ValueError("can only move elements forward")
        return LimitElement(j, e.value * self.product(e.stage, j))

    def _common(self, *es):
        j = max(e.stage for e in es)
        return j, [self.lift(e, j).value for e in es]

    def add(self, e: LimitElement, f: LimitElement) -> LimitElement:
        j, (a, b) = self._common(e, f)
        return LimitElement(j, a + b)

    def sub(self, e: LimitElement, f: LimitElement) -> LimitElement:
        j, (a, b) = self._common(e, f)
        return LimitElement(j, a - b)

    def scale(self, t: int, e: LimitElement) -> LimitElement:
        return LimitElement(e.stage, t * e.value)

    def equal(self, e: LimitElement, f: LimitElement) -> bool:
        _, (a, b) = self._common(e, f)
        return a == b

    def positive(self, e: LimitElement) -> bool:
        return limit_contains(self, e)

    def state(self, e: LimitElement, u: LimitElement) -> Fraction:
        """The unique state normalised at the order-unit ``u``."""
        if not self.positive(u) or u.value == 0:
            raise ValueError(f"{u} is not a nonzero positive element")
        _, (a, b) = self._common(e, u)
        return Fraction(a, b)


class StageMap:
    """Map between limits given stagewise: stage ``i`` goes to stage ``i`` times ``factor(i)``.

    It is an order-embedding of the limits when every stage map is one and the
    squares with both systems' connecting maps commute; ``verify`` checks both
    on the materialised stages.
    """

    def __init__(self, source: DirectedSystem, target: DirectedSystem,
                 factor: Callable[[int], int], name: str = "f"):
        self.source, self.target, self.factor, self.name = source, target, factor, name
        self.verified = False

    def apply(self, e: LimitElement) -> LimitElement:
        return LimitElement(e.stage, e.value * self.factor(e.stage))

    def verify(self, upto: int) -> list:
        out = []
        for i in range(upto + 1):
            k = self.factor(i)
            res = MultiplicationMap(k, self.source.stage(i), self.target.stage(i)).check()
            out.append((i, res))
            if i < upto:
                a = self.source.multiplier(i) * self.factor(i + 1)
                b = k * self.target.multiplier(i)
                if a != b:
                    raise ValueError(f"{self.name}: square at stage {i} does not commute ({a} != {b})")
        self.verified = all(r.embeds for _, r in out)
        return out

    def then(self, other: "StageMap") -> "StageMap":
        g = StageMap(self.source, other.target,
                     lambda i: self.factor(i) * other.factor(i), f"{other.name}.{self.name}")
        g.verified = self.verified and other.verified
        return g


def limit_contains(sys: DirectedSystem, e: LimitElement) -> bool:
    """Positivity in the limit, read off at the element's own stage."""
    if not sys.verified:
        raise ValueError("limit positivity needs a system whose maps are verified order-embeddings")
    if e.stage < 0:
        raise ValueError("stage index must be non-negative")
    if e.value < 0:
        return False
    return sys.stage(e.stage).contains(e.value)


def build_row(A: Cone, B: Cone, r: int, s: int, n_stages: int | None = None) -> DirectedSystem:
    """Stages ``G_0 = A``, ``G_i = r*G_{i-1} + s**i * B`` joined by ``x r``.

    With ``n_stages=None`` the system starts at ``A`` and grows on demand.
    """
    if math.gcd(r, s) != 1:
        raise ValueError(f"gcd(r, s) = gcd({r}, {s}) != 1")
    for c in (A, B):
        if not c.is_simple:
            raise ValueError(f"{c} is not a simple component")

    def extender(i, prev):
        return r, combine(r, prev, s ** i, B)

    sys = DirectedSystem([A], [], extender=extender)
    if n_stages:
        sys.extend_to(n_stages)
    return sys


# -- grids ------------------------------------------------------------------

GRID_KINDS = ("cons", "ertorema_block", "laleche")


class Grid:
    """Cones ``G[i, j]`` for ``0 <= i <= rows``, ``0 <= j <= cols``.

    ``h[j]`` multiplies ``(i, j) -> (i, j+1)`` and ``v[i]`` multiplies
    ``(i, j) -> (i+1, j)``; interior cells are ``v[i-1]*G[i-1,j] + h[j-1]*G[i,j-1]``.
    """

    def __init__(self, kind: str, cones: dict, h: Sequence[int], v: Sequence[int],
                 rows: int, cols: int):
        self.kind, self.cones = kind, cones
        self.h, self.v = list(h), list(v)
        self.rows, self.cols = rows, cols

    def __getitem__(self, ij) -> Cone:
        return self.cones[ij]

    def edges(self):
        for i in range(self.rows + 1):
            for j in range(self.cols + 1):
                if j < self.cols:
                    yield (i, j, "h")
                if i < self.rows:
                    yield (i, j, "v")

    def edge_map(self, i: int, j: int, d: str) -> MultiplicationMap:
        if d == "h":
            return MultiplicationMap(self.h[j], self.cones[i, j], self.cones[i, j + 1])
        return MultiplicationMap(self.v[i], self.cones[i, j], self.cones[i + 1, j])

    def verify_edges(self) -> list:
        out = []
        for i, j, d in self.edges():
            res = self.edge_map(i, j, d).check()
            out.append({"edge": [i, j, d],
                        "status": "proved" if res.embeds else "refuted",
                        "witness": res.witness})
        return out

    def verify_squares(self) -> list:
        """Both paths around each square multiply by the same integer."""
        out = []
        for i in range(self.rows):
            for j in range(self.cols):
                right_down = self.h[j] * self.v[i]
                down_right = self.v[i] * self.h[j]
                ok = right_down == down_right
                # the corner cone must receive both composites positively
                tgt = self.cones[i + 1, j + 1]
                ok = ok and all(tgt.contains(right_down * g) for g in self.cones[i, j].generators)
                out.append({"square": [i, j], "status": "proved" if ok else "refuted",
                            "witness": None if ok else right_down})
        return out

    @property
    def verified(self) -> bool:
        return all(r["status"] == "proved" for r in self.verify_edges())


def _ladder(A, B, r, s, n):
    cones = [A]
    for i in range(1, n + 1):
        cones.append(combine(r, cones[-1], s ** i, B))
    return cones


def build_grid(kind: str, params: dict, rows: int, cols: int, verify: bool = True) -> Grid:
    """Materialise a grid of the given kind.

    ``cons`` / ``ertorema_block``: either ``top`` (cones) and ``n`` (horizontal
    multipliers), or ``A``, ``q1``, ``p1`` for the ladder top row
    ``q1*G + p1**j * A``; the left column is ``r*G + s**i * B`` with ``r``,
    ``s`` (alias ``q2``, ``p2``) and ``B`` defaulting to ``<r, s-r>``.

    ``laleche``: both boundaries given, ``top`` with ``l`` and ``left`` with ``a``.
    """
    if kind not in GRID_KINDS:
        raise ValueError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}")
    if rows < 0 or cols < 0:
        raise ValueError("grid dimensions must be non-negative")
    p = dict(params)
    if kind == "laleche":
        top, h = list(p["top"]), list(p["l"])
        left, v = list(p["left"]), list(p["a"])
        if top[0] != left[0]:
            raise ValueError("top row and left column must share the corner cone")
        for ai in v[:rows]:
            for lj in h[:cols]:
                if math.gcd(ai, lj) != 1:
                    raise ValueError(f"gcd({ai}, {lj}) != 1 between column and row multipliers")
    else:
        r = p.get("r", p.get("q2"))
        s = p.get("s", p.get("p2"))
        if r is None or s is None:
            raise ValueError("grid needs r and s (or q2 and p2)")
        if math.gcd(r, s) != 1:
            raise ValueError(f"gcd(r, s) = gcd({r}, {s}) != 1")
        if "top" in p:
            top, h = list(p["top"]), list(p["n"])
        else:
            A, q1, p1 = p["A"], p["q1"], p["p1"]
            top, h = _ladder(A, A, q1, p1, cols), [q1] * cols
        B = p.get("B") or IntegerCone([r, s - r])
        for nj in h[:cols]:
            if math.gcd(r, nj) != 1:
                raise ValueError(f"gcd(r, n_j) = gcd({r}, {nj}) != 1")
        left, v = _ladder(top[0], B, r, s, rows), [r] * rows
    if len(top) < cols + 1 or len(h) < cols:
        raise ValueError(f"top row supplies {len(top)} cones, grid needs {cols + 1}")
    if len(left) < rows + 1 or len(v) < rows:
        raise ValueError(f"left column supplies {len(left)} cones, grid needs {rows + 1}")
    cones = {}
    for j in range(cols + 1):
        cones[0, j] = top[j]
    for i in range(1, rows + 1):
        cones[i, 0] = left[i]
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            cones[i, j] = combine(v[i - 1], cones[i - 1, j], h[j - 1], cones[i, j - 1])
    g = Grid(kind, cones, h[:cols], v[:rows], rows, cols)
    if verify:
        bad = [r for r in g.verify_edges() if r["status"] != "proved"]
        if bad:
            raise ValueError(f"grid edge {bad[0]['edge']} is not an order-embedding "
                             f"(witness {bad[0]['witness']})")
    return g


def diagonal_system(g: Grid) -> DirectedSystem:
    """Stages ``G[i, i]`` joined by ``h[i]*v[i]``."""
    n = min(g.rows, g.cols)
    stages = [g.cones[i, i] for i in range(n + 1)]
    mults = [g.h[i] * g.v[i] for i in range(n)]
    return DirectedSystem(stages, mults)
