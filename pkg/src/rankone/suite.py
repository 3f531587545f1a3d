"""The bundled acceptance suite behind ``verify-all``.

Each criterion returns one ``Verdict``.  Random inputs come from
``random.Random(f"{seed}:{criterion}")`` so every criterion draws from its own
reproducible stream and adding a criterion never shifts another one's inputs.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .construct import (BudgetExceeded, build_chain, build_laleche, extend_component,
                        find_pcd)
from .embed import LimitElement, MultiplicationMap, build_grid, diagonal_system
from .intcone import IntegerCone, analyze
from .intervals import Verdict, state_sup_probe
from .ratcone import check_covers, check_not_multiple, interval_D, new_block

DEFAULT_BOUNDS = {"level_bound": 10, "sweep_bound": 1000, "sample_count": None,
                  "work_limit": 10 ** 8}


def rng_for(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _count(bounds, default):
    return bounds.get("sample_count") or default


def _fail(claim, witness, note=""):
    return Verdict(claim, "refuted", witness=witness, note=note)


def brute_members(gens, n: int) -> list:
    """Plain reachability table on ``0..n``; the reference for cone membership."""
    r = [False] * (n + 1)
    r[0] = True
    for x in range(1, n + 1):
        r[x] = any(g <= x and r[x - g] for g in gens)
    return r


def criterion_conductor(seed, bounds, fault=False):
    claim = "criterion-01 two-generator conductor and gap count"
    rng = rng_for(seed, "conductor")
    n = 0
    while n < _count(bounds, 200):
        k, l = sorted(rng.sample(range(2, 61), 2))
        if math.gcd(k, l) != 1:
            continue
        n += 1
        prof = analyze(IntegerCone([k, l]))
        if prof.conductor != k * l - k - l + 1 or len(prof.gap_set) * 2 != (k - 1) * (l - 1):
            return _fail(claim, f"<{k},{l}>", f"conductor {prof.conductor}")
    return Verdict(claim, "proved", note=f"{n} coprime pairs")


def random_block_rationals(rng, r: int, count: int) -> list:
    out = []
    for _ in range(count):
        j = rng.randint(0, 5)
        out.append(Fraction(rng.randint(0, 100 * r ** j), r ** j))
    return out


def criterion_dual_oracle(seed, bounds, fault=False):
    claim = "criterion-02 direct and ladder membership agree"
    b = new_block(2, 7, 10, 3)
    xs = random_block_rationals(rng_for(seed, "dual_oracle"), 3, _count(bounds, 500))
    for idx, x in enumerate(xs):
        lad = b.contains_ladder(x)
        if fault and idx == 0:
            lad = not lad
        if b.contains_direct(x) != lad:
            return _fail(claim, x, "oracles disagree")
    return Verdict(claim, "proved", note=f"{len(xs)} rationals a/3^j")


def sample_members(b, rng, count):
    """Members of ``M`` from random short sums of level generators."""
    gens = [Fraction(k, b.r) for k in b.A.generators]
    gens += [Fraction(k, b.r) * b.e(l) for l in (1, 2, 3) for k in b.B.generators]
    return [sum((rng.choice(gens) for _ in range(rng.randint(0, 5))), Fraction(0))
            for _ in range(count)]


def criterion_not_multiple(seed, bounds, fault=False):
    claim = "criterion-03 s not in tD for t<=r-1 and rD covers samples"
    b = new_block(2, 7, 10, 3)
    lb = bounds["level_bound"]
    for t in (1, 2):
        v = check_not_multiple(b, t, lb)
        if v.status == "refuted":
            return _fail(claim, f"t={t}, m={v.witness}", v.note)
    if b.contains_direct(Fraction(110, 9)):
        return _fail(claim, "110/9", "2e_2 - s lies in M")
    v = check_covers(b, sample_members(b, rng_for(seed, "covers"), _count(bounds, 100)))
    if v.status != "proved":
        return _fail(claim, v.witness, v.note)
    return Verdict(claim, "verified_to_bound", bound=lb,
                   note=f"levels <= {lb}; {len(v.details)} samples covered")


def criterion_pcd(seed, bounds, fault=False):
    claim = "criterion-04 minimal (p,c,d) chooser"
    rng = rng_for(seed, "pcd")
    for _ in range(_count(bounds, 100)):
        a, N = rng.randint(2, 30), rng.randint(1, 50)
        t = find_pcd(a, N)
        if t.violations():
            return _fail(claim, (a, N), "; ".join(t.violations()))
    for (a, N), want in {(3, 6): (7, 4, 73), (5, 4): (6, 6, 161)}.items():
        t = find_pcd(a, N)
        if (t.p, t.c, t.d) != want:
            return _fail(claim, (a, N), f"got {(t.p, t.c, t.d)}")
    return Verdict(claim, "proved")


def criterion_gap_profile(seed, bounds, fault=False):
    claim = "criterion-05 gap set and conductor of 5<2,5>+6<6,161>"
    G, pcd, gp = extend_component(IntegerCone([2, 5]), 5)
    if gp.L != (15, 51, 87, 123, 159):
        return _fail(claim, gp.L)
    hit = [l for l in gp.L if G.contains(l)]
    if hit:
        return _fail(claim, hit[0], "gap value is a member")
    top = bounds["sweep_bound"]
    flat = G.flatten().member_array(top)
    for x in range(top + 1):
        m = G.contains(x)
        if m != bool(flat[x]):
            return _fail(claim, x, "layered and flat membership differ")
        if x > gp.L[x % 5] and not m:
            return _fail(claim, x, "residue characterisation fails")
    n = G.scan_conductor()
    if n != gp.L[-1] + 1:
        return _fail(claim, n, "scanned conductor")
    return Verdict(claim, "proved", note=f"sweep to {top}, conductor {n}")


def criterion_chain(seed, bounds, fault=False):
    claim = "criterion-06 chain of depth 3 with conditions (a)-(e)"
    try:
        rep = build_chain(IntegerCone([2, 5]), [5, 161, 30000], 3,
                          work_limit=bounds.get("work_limit"))
    except BudgetExceeded as exc:
        return Verdict(claim, "skipped", note=f"budget: {exc}")
    bad = [v for v in rep.verdicts if v.status == "refuted"]
    if bad:
        return _fail(claim, bad[0].claim, bad[0].note)
    if rep.states[1] != Fraction(61, 25):
        return _fail(claim, rep.states[1], "s_2(y_2)")
    return Verdict(claim, "proved", note=f"{len(rep.verdicts)} checks; states "
                   + ", ".join(map(str, rep.states)))


def random_simple_cone(rng, top=40):
    while True:
        gens = rng.sample(range(2, top + 1), rng.randint(2, 4))
        if math.gcd(*gens) == 1:
            return IntegerCone(gens)


def random_map(rng):
    """A positive multiplication map; about half of them are embeddings."""
    while True:
        src = random_simple_cone(rng)
        m = rng.randint(1, 6)
        extra = random_simple_cone(rng)
        if rng.random() < 0.5:
            k = rng.choice([x for x in range(1, 8) if math.gcd(x, m) == 1])
            tgt = IntegerCone([m * g for g in src.generators] + [k * g for g in extra.generators])
        else:
            tgt = IntegerCone([m * g for g in src.generators] + list(extra.generators[:1]))
        if tgt.is_simple:
            return MultiplicationMap(m, src, tgt)


def criterion_embedding(seed, bounds, fault=False):
    claim = "criterion-07 order-embedding decision vs exhaustive check"
    rng = rng_for(seed, "embedding")
    n_emb = 0
    for _ in range(_count(bounds, 100)):
        mp = random_map(rng)
        top = 2 * max(mp.source.conductor, mp.target.conductor)
        s = brute_members(mp.source.generators, top)
        t = brute_members(mp.target.generators, mp.multiplier * top)
        brute = all(s[x] == t[mp.multiplier * x] for x in range(top + 1))
        got = mp.check().embeds
        n_emb += got
        if got != brute:
            return _fail(claim, repr(mp))
    return Verdict(claim, "proved", note=f"{n_emb} embeddings among the sampled maps")


def _stability(sys, rng, count):
    n = sys.truncation
    for _ in range(count):
        i = rng.randint(0, n)
        j = rng.randint(i, n)
        x = rng.randint(0, 2 * sys.stage(i).conductor + 5)
        a = sys.positive(LimitElement(i, x))
        b = sys.stage(j).contains(x * sys.product(i, j))
        if a != b:
            return (i, j, x)
    return None


def criterion_grids(seed, bounds, fault=False):
    claim = "criterion-08 grid edges, squares and limit positivity"
    rng = rng_for(seed, "grids")
    g = build_grid("cons", {"A": IntegerCone([2, 5]), "q1": 2, "p1": 7, "q2": 3, "p2": 7},
                   4, 4, verify=False)
    recs = g.verify_edges() + g.verify_squares()
    bad = [r for r in recs if r["status"] != "proved"]
    if bad:
        return _fail(claim, bad[0])
    w = _stability(diagonal_system(g), rng, _count(bounds, 100))
    if w:
        return _fail(claim, w, "cons diagonal stagewise positivity")
    rep = build_laleche([2, 3], [5, 7, 97], 3, samples=10, seed=seed)
    bad = [v for v in rep.verdicts if v.status == "refuted"]
    if bad:
        return _fail(claim, bad[0].claim)
    w = _stability(diagonal_system(rep.grid), rng, _count(bounds, 100))
    if w:
        return _fail(claim, w, "laleche diagonal stagewise positivity")
    return Verdict(claim, "proved", note=f"cons 5x5 ({len(recs)} edge/square checks), laleche 3x3")


def criterion_probe(seed, bounds, fault=False):
    claim = "criterion-09 unbounded interval probe at 10^6"
    b = new_block(2, 7, 10, 3)
    v = state_sup_probe(interval_D(b), 1, 10 ** 6)
    if v.status != "proved" or v.witness != 12:
        return _fail(claim, v.witness if v.witness is not None else "-", v.note)
    return Verdict(claim, "proved", note="least n is 12")


CRITERIA = [criterion_conductor, criterion_dual_oracle, criterion_not_multiple, criterion_pcd,
            criterion_gap_profile, criterion_chain, criterion_embedding, criterion_grids,
            criterion_probe]


def run_suite(seed: int = 0, bounds: dict | None = None, inject_fault: bool = False) -> list:
    b = dict(DEFAULT_BOUNDS)
    b.update({k: v for k, v in (bounds or {}).items() if v is not None})
    return [c(seed, b, fault=inject_fault) for c in CRITERIA]
