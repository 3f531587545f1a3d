"""Explicit constructions of simple components, chains and grids with their certificates.

* ``find_pcd`` / ``extend_component``: grow ``H`` into ``G = a*H + p*<c, d>``
  with a known gap pattern and conductor.
* ``unpaso`` / ``build_chain``: iterate the extension with a marked element
  ``y_i`` and check the whole family of chain inequalities exactly.
* ``build_ertorema`` / ``build_laleche``: assemble grids of ladders, read off
  their diagonals and transport the interval certificates along the way.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .embed import (DirectedSystem, Grid, LimitElement, MultiplicationMap, StageMap,
                    build_grid, build_row, diagonal_system)
from .intcone import Cone, IntegerCone, LayeredCone
from .intervals import Interval, Verdict, pushforward
from .ratcone import Block, check_covers, check_not_multiple, new_block
from .supernat import Supernatural


class BudgetExceeded(RuntimeError):
    """Raised before starting work whose estimated cost passes the configured limit."""


@dataclass(frozen=True)
class PcdTriple:
    p: int
    c: int
    d: int
    a: int
    N: int

    def violations(self) -> list:
        p, c, d, a, N = self.p, self.c, self.d, self.a, self.N
        out = []
        if math.gcd(a, p) != 1:
            out.append("gcd(a,p) != 1")
        if math.gcd(a, c) != 1:
            out.append("gcd(a,c) != 1")
        if math.gcd(c, d) != 1:
            out.append("gcd(c,d) != 1")
        if (p * c) % a != 1 % a or (p * d) % a != 1 % a:
            out.append("pc = pd = 1 (mod a) fails")
        if not p > N:
            out.append("p > N fails")
        if not p * c > a * N:
            out.append("pc > aN fails")
        if not d > max((a - 1) * p * c + a * (N - 1), a * c):
            out.append("d > max((a-1)pc + a(N-1), ac) fails")
        return out


def find_pcd(a: int, N: int) -> PcdTriple:
    """Least ``(p, c, d)`` in lexicographic order meeting all six constraints.

    Every admissible ``p`` admits some ``c`` and ``d``, so the least ``p``
    is the least integer above ``N`` prime to ``a``; then ``c`` and ``d`` are
    the least members of the residue class ``p**-1 mod a`` past their bounds.
    """
    if a < 2:
        raise ValueError(f"a must be at least 2, got {a}")
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    p = N + 1
    while math.gcd(p, a) != 1:
        p += 1
    inv = pow(p, -1, a)
    c = inv if inv else a
    while p * c <= a * N:
        c += a
    lo = max((a - 1) * p * c + a * (N - 1), a * c)
    d = lo + 1 + (inv - (lo + 1)) % a
    while math.gcd(c, d) != 1:
        d += a
    out = PcdTriple(p, c, d, a, N)
    assert not out.violations(), out.violations()
    return out


@dataclass(frozen=True)
class GapProfile:
    L: tuple
    N_G: int


def extend_component(H: Cone, a: int) -> tuple:
    """``G = a*H + p*<c, d>`` with ``(p, c, d) = find_pcd(a, N_H)``.

    Returns ``(G, pcd, GapProfile)``.  ``G`` carries the predicted conductor
    ``l_{a-1} + 1`` as a hint, which is certified on first use, and the map
    ``x a`` from ``H`` is checked to be an order-embedding.
    """
    if not H.is_simple:
        raise ValueError(f"{H} is not a simple component")
    N = H.conductor
    pcd = find_pcd(a, N)
    pc = pcd.p * pcd.c
    L = tuple(i * pc + a * (N - 1) for i in range(a))
    G = LayeredCone(a, H, pcd.p, IntegerCone([pcd.c, pcd.d]), conductor_hint=L[-1] + 1)
    res = MultiplicationMap(a, H, G).check()
    if not res.embeds:
        raise RuntimeError(f"x{a}: {H} -> {G} is not an order-embedding (witness {res.witness})")
    return G, pcd, GapProfile(L, L[-1] + 1)


@dataclass
class Step:
    G: LayeredCone
    y2: int
    pcd: PcdTriple
    gaps: GapProfile
    verdicts: list


def _v(claim: str, ok: bool, witness=None, note: str = "") -> Verdict:
    if ok:
        return Verdict(claim, "proved", note=note)
    return Verdict(claim, "refuted", witness=witness if witness is not None else "-", note=note)


def unpaso(H: Cone, y1: int, a: int) -> Step:
    """One extension step carrying a marked pair ``y1 - 1, y1`` along."""
    N = H.conductor
    if N is None:
        raise ValueError(f"{H} is not a simple component")
    if H.contains(1):
        raise ValueError(f"1 lies in {H}; the step needs N_H >= 2")
    if not (H.contains(y1) and H.contains(y1 - 1)):
        raise ValueError(f"y1={y1} and y1-1 must both lie in {H}")
    if a <= N:
        raise ValueError(f"a must exceed N_H={N}, got a={a}")
    G, pcd, gp = extend_component(H, a)
    pc = pcd.p * pcd.c
    y2 = pc + a * y1
    l_mid = (N - 1) * pc + a * (N - 1)
    diff = (N - 1) * y2 - (N - 1) * a * (y1 - 1)
    vs = [
        _v("N_G = l_{a-1} + 1 (window certificate)", G.certify_conductor(gp.N_G), gp.N_G),
        _v("a^2 N_H < N_G", a * a * N < gp.N_G, note=f"{a * a * N} < {gp.N_G}"),
        _v("y2 - 1 in G", G.contains(y2 - 1), y2 - 1),
        _v("y2 - a*y1 = pc > a N_H and in G",
           y2 - a * y1 == pc and pc > a * N and G.contains(pc), pc),
        _v("(N_H-1)y2 - (N_H-1)a(y1-1) = l_{N_H-1} not in G",
           diff == l_mid and not G.contains(diff), diff),
    ]
    return Step(G, y2, pcd, gp, vs)


@dataclass
class ChainStage:
    index: int
    cone: Cone
    N: int
    y: int
    a: int | None = None
    pcd: PcdTriple | None = None

    @property
    def x(self) -> int:
        return self.y - 1


@dataclass
class ChainReport:
    stages: list
    verdicts: list
    states: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)


def _next_a(A: Sequence[int], N: int) -> int:
    for a in A:
        if a > max(N, 3):
            return a
    raise ValueError(f"sequence A is exhausted: no element exceeds max(N_H, 3) = {max(N, 3)}")


def build_chain(H1: IntegerCone, A: Sequence[int], depth: int,
                work_limit: int | None = None) -> ChainReport:
    """Stages ``H_1, ..., H_depth`` with ``H_{i+1} = a_i H_i + p_i <c_i, d_i>``.

    ``work_limit`` caps the summed conductors of the stages whose gaps must be
    scanned; the chain stops with ``BudgetExceeded`` before crossing it.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    A = list(A)
    if any(b <= a for a, b in zip(A, A[1:])):
        raise ValueError(f"A must be strictly ascending, got {A}")
    N1 = H1.conductor
    if N1 is None:
        raise ValueError(f"{H1} is not a simple component")
    if H1.contains(1):
        raise ValueError(f"1 lies in {H1}")
    stages = [ChainStage(1, H1, N1, N1 + 1)]
    verdicts = []
    work = 0
    for i in range(1, depth):
        cur = stages[-1]
        work += cur.N
        if work_limit is not None and work > work_limit:
            raise BudgetExceeded(f"stage {i + 1} needs about {work} units, limit is {work_limit}")
        a = _next_a(A, cur.N)
        step = unpaso(cur.cone, cur.y, a)
        cur.a, cur.pcd = a, step.pcd
        verdicts += [Verdict(f"step {i}: {v.claim}", v.status, v.bound, v.witness, v.note)
                     for v in step.verdicts]
        stages.append(ChainStage(i + 1, step.G, step.gaps.N_G, step.y2))
    verdicts += verify_chain(stages, A)
    states = chain_states(stages)
    verdicts += _state_verdicts(stages, states)
    return ChainReport(stages, verdicts, states)


def verify_chain(stages: list, A: Sequence[int]) -> list:
    """Conditions (a) to (e) on every materialised stage and pair ``j < i``."""
    out = []
    a1 = stages[0].a
    N1 = stages[0].N
    for st in stages:
        i, H, N, y = st.index, st.cone, st.N, st.y
        if st.a is not None:
            out.append(_v(f"(a) a_{i} in A", st.a in A, st.a))
            out.append(_v(f"(b) a_{i} > N_H{i}", st.a > N, st.a))
        out.append(_v(f"(b) y_{i}, x_{i} in H_{i}", H.contains(y) and H.contains(y - 1), y))
        if i >= 2:
            prev = stages[i - 2]
            out.append(_v(f"(b) N_H{i} > a_{i - 1}^2 N_H{i - 1}", N > prev.a ** 2 * prev.N,
                          N, note=f"{N} > {prev.a ** 2 * prev.N}"))
            out.append(_v(f"(b) N_H{i} > (a_1^2)^{i - 1} N_H1", N > a1 ** (2 * (i - 1)) * N1, N))
            out.append(_v(f"(b) a_{i - 1}^2 N_H{i - 1} >= (a_1^2)^{i - 1} N_H1",
                          prev.a ** 2 * prev.N >= a1 ** (2 * (i - 1)) * N1, prev.a))
        # (c): the difference of the two sides is N_i - 1, a gap
        out.append(_v(f"(c) (N_H{i}-1)x_{i} not <= (N_H{i}-1)y_{i} in H_{i}",
                      not H.contains(N - 1), N - 1))
        if st.a is not None and i < len(stages):
            nxt = stages[i]
            d = nxt.y - st.a * y
            out.append(_v(f"(d) a_{i} y_{i} < y_{i + 1} in H_{i + 1}",
                          d > 0 and nxt.cone.contains(d), d))
        for j in range(1, i):
            sj = stages[j - 1]
            prod = math.prod(s.a for s in stages[j - 1:i - 1])
            d = (sj.N - 1) * y - (sj.N - 1) * prod * sj.x
            ok = d < 0 or not H.contains(d)
            out.append(_v(f"(e) j={j} i={i}: (N_H{j}-1) a_{i - 1}..a_{j} x_{j} not <= (N_H{j}-1) y_{i}",
                          ok, d))
    return out


def chain_states(stages: list) -> list:
    """``s_i(y_i) = y_i / (a_{i-1} ... a_1 y_1)``."""
    out, unit = [], stages[0].y
    for k, st in enumerate(stages):
        if k:
            unit *= stages[k - 1].a
        out.append(Fraction(st.y, unit))
    return out


def state_lower_bounds(stages: list) -> list:
    """Closed-form bound ``a_1^{(k-3)(k-2)} N_1 / y_1`` and stepwise bound for stage ``k >= 2``."""
    a1, N1, y1 = stages[0].a, stages[0].N, stages[0].y
    out = [None]
    unit = y1
    for k in range(2, len(stages) + 1):
        prev = stages[k - 2]
        closed = Fraction(a1 ** ((k - 3) * (k - 2)), 1) * Fraction(N1, y1)
        out.append((closed, Fraction(prev.N, unit)))
        unit *= prev.a
    return out


def _state_verdicts(stages: list, states: list) -> list:
    out = []
    for k in range(1, len(states)):
        out.append(_v(f"state s_{k + 1}(y_{k + 1}) > s_{k}(y_{k})", states[k] > states[k - 1],
                      str(states[k])))
    for k, b in enumerate(state_lower_bounds(stages), start=1):
        if b is None:
            continue
        closed, step = b
        s = states[k - 1]
        out.append(_v(f"state s_{k}(y_{k}) > a_1^((k-3)(k-2)) N_H1/y_1", s > closed, str(s),
                      note=f"{s} > {closed}"))
        out.append(_v(f"state s_{k}(y_{k}) > N_H{k - 1}/(a_{k - 2}..a_1 y_1)", s > step, str(s),
                      note=f"{s} > {step}"))
    return out


# -- grid assemblies -----------------------------------------------------------

@dataclass
class ConstructionReport:
    verdicts: list
    data: dict

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)


def _pairwise_coprime(seq: Sequence[int], name: str) -> None:
    for x, y in itertools.combinations(seq, 2):
        if math.gcd(x, y) != 1:
            raise ValueError(f"{name} must be pairwise coprime: gcd({x}, {y}) = {math.gcd(x, y)}")


def choose_p(A: IntegerCone, q: int) -> int:
    """Least ``p`` in ``A`` with ``p > 2q`` and ``gcd(p, q) = 1``."""
    p = 2 * q + 1
    while not (math.gcd(p, q) == 1 and A.contains(p)):
        p += 1
    return p


def _edge_verdicts(tag: str, g: Grid) -> list:
    out = []
    for rec in g.verify_edges():
        i, j, d = rec["edge"]
        out.append(Verdict(f"{tag} edge ({i},{j},{d}) order-embedding", rec["status"],
                           witness=rec["witness"]))
    for rec in g.verify_squares():
        i, j = rec["square"]
        out.append(Verdict(f"{tag} square ({i},{j}) commutes", rec["status"],
                           witness=rec["witness"]))
    return out


def _sample_M(b: Block, rng: random.Random, count: int) -> list:
    """Members of ``M`` as random short sums of its generators."""
    gens = [Fraction(k, b.r) for k in b.A.generators]
    gens += [Fraction(k, b.r) * b.e(l) for l in (1, 2, 3) for k in b.B.generators]
    out = []
    for _ in range(count):
        x = sum((rng.choice(gens) for _ in range(rng.randint(0, 4))), Fraction(0))
        out.append(x)
    return out


def _interval_checks(tag: str, b: Block, X: Interval, amb, s_elem, t_max: int,
                     level_bound: int, rng: random.Random, samples: int) -> list:
    """``t X != G+`` for ``t <= t_max`` and covering by ``q X`` on samples."""
    out = []
    top = X.start
    # materialise as many generators as the diagram carries
    while True:
        try:
            X.generator(top + 1)
        except (IndexError, KeyError):
            break
        top += 1
        if top >= X.start + level_bound:
            break
    for t in range(1, t_max + 1):
        v = check_not_multiple(b, t, level_bound)
        out.append(Verdict(f"{tag}: {t}{X.name} != G+ (block prefix)", v.status, v.bound,
                           v.witness, v.note))
        hit = next((n for n in range(X.start, top + 1)
                    if amb.positive(amb.sub(amb.scale(t, X.generator(n)), s_elem))), None)
        if hit is None:
            out.append(Verdict(f"{tag}: {t}{X.name} != G+ (in diagram)", "verified_to_bound",
                               bound=top, note="s stays above t*y_n for materialised n"))
        else:
            out.append(Verdict(f"{tag}: {t}{X.name} != G+ (in diagram)", "refuted", witness=hit))
    v = check_covers(b, _sample_M(b, rng, samples))
    out.append(Verdict(f"{tag}: {b.r}{X.name} = G+ on samples", v.status, v.bound, v.witness,
                       v.note, v.details))
    return out


def build_ertorema(J: Sequence[int], diagrams: int, size: int, p1: int | None = None,
                   level_bound: int = 10, samples: int = 20, seed: int = 0) -> ConstructionReport:
    """Successive grids whose diagonals become the next top rows.

    ``size`` is the number of cells per side of each grid (indices ``0..size-1``).
    """
    J = list(J)
    if diagrams < 1:
        raise ValueError("need at least one diagram")
    if len(J) < diagrams + 1:
        raise ValueError(f"{diagrams} diagrams need {diagrams + 1} entries of J, got {len(J)}")
    if size < 1:
        raise ValueError("size must be at least 1")
    if any(q < 2 for q in J):
        raise ValueError("entries of J must be at least 2")
    _pairwise_coprime(J, "J")
    rng = random.Random(f"{seed}:ertorema")
    q1 = J[0]
    if p1 is None:
        p1 = 2 * q1 + 1
        while math.gcd(p1, q1) != 1:
            p1 += 1
    A = IntegerCone([q1, p1 - q1])
    n = size - 1
    verdicts = []
    data = {"q": J[: diagrams + 1], "p": [p1], "A": str(A), "diagrams": []}

    top_block = new_block(q1, p1, p1, q1)
    top = build_row(A, A, q1, p1, n)
    top_cones, top_mults = top.stages, top.multipliers
    top_sys = DirectedSystem(top_cones, top_mults)
    D1 = Interval(top_sys, lambda k: top_block.ladder_index(top_block.e(k)), top_block.D_start, "D'_1")
    s1 = top_block.ladder_index(p1)
    verdicts += _interval_checks("D'_1", top_block, D1, top_sys, s1, q1 - 1, level_bound, rng, samples)

    for k in range(1, diagrams + 1):
        qk = J[k]
        pk = choose_p(A, qk)
        data["p"].append(pk)
        tag = f"diagram {k}"
        g = build_grid("ertorema_block", {"top": top_cones, "n": top_mults, "r": qk, "s": pk},
                       n, n, verify=False)
        verdicts += _edge_verdicts(tag, g)
        diag = diagonal_system(g)
        col_block = new_block(q1, p1, pk, qk)
        col = DirectedSystem([g[i, 0] for i in range(n + 1)], g.v)
        psi = StageMap(col, diag, lambda i, h=tuple(g.h): math.prod(h[:i]), f"psi_{k - 1}")
        for i, res in psi.verify(n):
            verdicts.append(Verdict(f"{tag} column stage {i} -> diagonal order-embedding",
                                    "proved" if res.embeds else "refuted", witness=res.witness))
        D_col = Interval(col, lambda m, b=col_block: b.ladder_index(b.e(m)), col_block.D_start,
                         f"D^{k - 1}")
        Dk = pushforward(psi, D_col)
        Dk.name = f"D'_{k + 1}"
        s_elem = psi.apply(col_block.ladder_index(pk))
        verdicts += _interval_checks(f"D'_{k + 1}", col_block, Dk, diag, s_elem, qk - 1,
                                     level_bound, rng, samples)
        data["diagrams"].append({
            "k": k, "q": qk, "p": pk, "top_multiplier": top_mults[0] if top_mults else None,
            "diagonal_multiplier": diag.multipliers[0] if n else None,
            "diagonal": [str(c) for c in diag.stages],
        })
        top_cones, top_mults = diag.stages, diag.multipliers
    data["supernatural"] = str(Supernatural(infinite_support=J[: diagrams + 1]))
    data["top_row"] = [str(c) for c in top_cones]
    data["top_multipliers"] = top_mults
    data["note"] = "multiples checked for 1 <= t <= q_i - 1 in diagram i"
    rep = ConstructionReport(verdicts, data)
    rep.top_cones, rep.top_multipliers, rep.A = top_cones, top_mults, A
    return rep


def build_laleche(L: Sequence[int], J: Sequence[int], size: int, level_bound: int = 10,
                  samples: int = 20, seed: int = 0, work_limit: int | None = None
                  ) -> ConstructionReport:
    """Grid whose top row is an assembled diagonal and whose left column is a chain."""
    L, J = list(L), list(J)
    if size < 1:
        raise ValueError("size must be at least 1")
    if len(L) < 2:
        raise ValueError("L needs at least two entries")
    for q in L:
        for b in J:
            if math.gcd(q, b) != 1:
                raise ValueError(f"gcd(q_i, b_j) = gcd({q}, {b}) != 1")
    ert = build_ertorema(L, len(L) - 1, size, level_bound=level_bound, samples=samples,
                         seed=seed)
    verdicts = [Verdict(f"row: {v.claim}", v.status, v.bound, v.witness, v.note)
                for v in ert.verdicts]
    chain = build_chain(ert.A, J, size, work_limit=work_limit)
    verdicts += [Verdict(f"column: {v.claim}", v.status, v.bound, v.witness, v.note)
                 for v in chain.verdicts]
    n = size - 1
    top, l = ert.top_cones[: n + 1], ert.top_multipliers[:n]
    left = [st.cone for st in chain.stages]
    a = [st.a for st in chain.stages[:-1]]
    g = build_grid("laleche", {"top": top, "l": l, "left": left, "a": a}, n, n, verify=False)
    verdicts += _edge_verdicts("laleche", g)
    diag = diagonal_system(g)
    # the chain interval E = <y_i> carried into the diagonal
    col = DirectedSystem(left, a)
    tau = StageMap(col, diag, lambda i: math.prod(l[:i]), "tau")
    for i, res in tau.verify(n):
        verdicts.append(Verdict(f"laleche column stage {i} -> diagonal order-embedding",
                                "proved" if res.embeds else "refuted", witness=res.witness))
    E = pushforward(tau, Interval(col, lambda i: LimitElement(i, chain.stages[i].y), 0, "E"))
    for i in range(1, n + 1):
        for j in range(i):
            sj = chain.stages[j]
            lhs = tau.apply(LimitElement(j, (sj.N - 1) * sj.x))
            rhs = diag.scale(sj.N - 1, E.generator(i))
            ok = not diag.positive(diag.sub(rhs, lhs))
            verdicts.append(_v(f"laleche: (N_K{j + 1}-1) x_{j + 1} not <= (N_K{j + 1}-1) y_{i + 1} "
                               f"in the diagonal", ok, i))
    u = E.generator(0)
    st = [diag.state(E.generator(i), u) for i in range(n + 1)]
    for i in range(1, n + 1):
        verdicts.append(_v(f"laleche: state of y_{i + 1} exceeds state of y_{i}", st[i] > st[i - 1],
                           str(st[i])))
    data = {"L": L, "J": J, "a": a, "l": l,
            "top_row": [str(c) for c in top], "left_column": [str(c) for c in left],
            "diagonal_multipliers": diag.multipliers,
            "states": [str(x) for x in st],
            "supernatural": str(Supernatural(infinite_support=L)
                                * Supernatural.from_sequence(a))}
    rep = ConstructionReport(verdicts, data)
    rep.grid = g
    return rep
