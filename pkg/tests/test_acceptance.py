"""The ten acceptance criteria, each at its stated time limit.

Run ``pytest tests/test_acceptance.py -v`` (a PASS/FAIL line per criterion is
printed at the end of the session) or ``python3 tests/test_acceptance.py``.
"""

import json
import math
import random
import re
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from conftest import ACCEPTANCE_LINES  # noqa: E402
from rankone.construct import build_chain, build_laleche, extend_component, find_pcd  # noqa: E402
from rankone.embed import MultiplicationMap, build_grid, diagonal_system  # noqa: E402
from rankone.intcone import IntegerCone, analyze  # noqa: E402
from rankone.intervals import state_sup_probe  # noqa: E402
from rankone.ratcone import (check_covers, check_not_multiple, contains_direct,  # noqa: E402
                             contains_ladder, interval_D, new_block)

SEED = 0


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed <= limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number:2d} {status}  {elapsed:6.2f}s / {limit}s  {title}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_01_conductor_closed_form():
    with criterion(1, "two-generator conductor and gap count", 1):
        rng = random.Random(f"{SEED}:1")
        pairs = 0
        while pairs < 200:
            k, l = sorted(rng.sample(range(2, 61), 2))
            if math.gcd(k, l) != 1:
                continue
            pairs += 1
            p = analyze(IntegerCone([k, l]))
            assert p.conductor == k * l - k - l + 1, (k, l)
            assert 2 * len(p.gap_set) == (k - 1) * (l - 1), (k, l)


def test_criterion_02_dual_membership():
    with criterion(2, "direct and ladder membership agree on 500 rationals", 30):
        b = new_block(2, 7, 10, 3)
        scale, tab = oracles.block_members(2, 7, 10, 3, 5)
        rng = random.Random(f"{SEED}:2")
        for _ in range(500):
            j = rng.randint(0, 5)
            x = F(rng.randint(0, 100 * 3 ** j), 3 ** j)
            d, lad = contains_direct(b, x), contains_ladder(b, x)
            assert d == lad, x
            assert d == tab[int(x * scale)], x


def test_criterion_03_not_a_multiple_and_cover():
    with criterion(3, "s not in tD (t=1,2, levels <= 10); rD covers 100 members", 20):
        b = new_block(2, 7, 10, 3)
        for t in (1, 2):
            v = check_not_multiple(b, t, 10)
            assert v.status == "verified_to_bound" and v.bound == 10
        spot = 2 * b.e(2) - b.s
        assert spot == F(110, 9)
        scale, tab = oracles.block_members(2, 7, 10, 3, 6, bound=2000)
        assert not tab[int(spot * scale)]
        rng = random.Random(f"{SEED}:3")
        gens = [F(k, 3) for k in (2, 5)] + [F(k, 3) * b.e(l) for l in (1, 2, 3) for k in (3, 7)]
        samples = [sum((rng.choice(gens) for _ in range(rng.randint(0, 5))), F(0))
                   for _ in range(100)]
        v = check_covers(b, samples)
        assert v.status == "proved" and len(v.details) == 100
        for x, k, _ in v.details:
            x = F(x)
            assert tab[int((b.r * b.e(k) - x) * scale)], (x, k)
            if k > 1:
                lower = b.r * b.e(k - 1) - x
                assert lower < 0 or not tab[int(lower * scale)], (x, k)


def test_criterion_04_pcd_chooser():
    with criterion(4, "(p,c,d) chooser constraints and exact values", 2):
        rng = random.Random(f"{SEED}:4")
        for _ in range(100):
            a, N = rng.randint(2, 30), rng.randint(1, 50)
            t = find_pcd(a, N)
            p, c, d = t.p, t.c, t.d
            assert math.gcd(a, p) == math.gcd(a, c) == math.gcd(c, d) == 1
            assert (p * c) % a == (p * d) % a == 1 % a
            assert p > N and p * c > a * N
            assert d > max((a - 1) * p * c + a * (N - 1), a * c)
        assert (lambda t: (t.p, t.c, t.d))(find_pcd(3, 6)) == (7, 4, 73)
        assert (lambda t: (t.p, t.c, t.d))(find_pcd(5, 4)) == (6, 6, 161)


def test_criterion_05_gap_profile():
    with criterion(5, "gaps of 5<2,5>+6<6,161> and conductor 160", 5):
        G, _, gp = extend_component(IntegerCone([2, 5]), 5)
        assert gp.L == (15, 51, 87, 123, 159)
        assert not any(G.contains(l) for l in gp.L)
        bits = oracles.member_bits([10, 25, 36, 966], 1000)
        for x in range(1001):
            inside = bool(bits >> x & 1)
            assert G.contains(x) == inside, x
            if x > gp.L[x % 5]:
                assert inside, x
        assert G.scan_conductor() == 160 == gp.L[4] + 1
        assert oracles.conductor([10, 25, 36, 966]) == 160


def test_criterion_06_chain():
    with criterion(6, "depth-3 chain, conditions (a)-(e), states", 60):
        rep = build_chain(IntegerCone([2, 5]), [5, 161, 30000], 3)
        assert rep.ok, [v for v in rep.verdicts if not v.ok]
        st = rep.stages
        for i in range(1, 3):
            gens = st[i].cone.flatten().generators
            for j in range(i):
                k = st[j].N - 1
                v = k * st[i].y - k * math.prod(s.a for s in st[j:i]) * st[j].x
                assert not oracles.member_bits(gens, v) >> v & 1, (i, j)
        s = rep.states
        assert s[0] < s[1] < s[2] and s[1] == F(61, 25)
        a1, N1, y1 = st[0].a, st[0].N, st[0].y
        # the bound for stage i+1 carries the exponent (i-2)(i-1)
        for i in range(1, 3):
            assert s[i] > F(a1 ** ((i - 2) * (i - 1)) * N1, y1), i


def test_criterion_07_embedding_decision():
    with criterion(7, "embedding decision vs exhaustive check on 100 maps", 10):
        rng = random.Random(f"{SEED}:7")
        done = 0
        while done < 100:
            src = rng.sample(range(2, 41), rng.randint(2, 4))
            m = rng.randint(1, 6)
            tgt = [m * g for g in src] + rng.sample(range(2, 41), rng.randint(1, 3))
            if math.gcd(*src) != 1 or math.gcd(*tgt) != 1:
                continue
            done += 1
            got = MultiplicationMap(m, IntegerCone(src), IntegerCone(tgt)).check().embeds
            assert got == oracles.embeds(m, src, tgt), (m, src, tgt)


def _stable(sys_, rng, count):
    n = sys_.truncation
    for _ in range(count):
        i = rng.randint(0, n)
        x = rng.randint(0, 2 * sys_.stage(i).conductor + 5)
        inside = sys_.stage(i).contains(x)
        for j in range(i + 1, n + 1):
            assert sys_.stage(j).contains(x * sys_.product(i, j)) == inside, (i, j, x)


def test_criterion_08_grids():
    with criterion(8, "cons 4x4 and laleche 3x3 grids", 30):
        rng = random.Random(f"{SEED}:8")
        g = build_grid("cons", {"A": IntegerCone([2, 5]), "q1": 2, "p1": 7, "q2": 3, "p2": 7},
                       4, 4, verify=False)
        assert all(r["status"] == "proved" for r in g.verify_edges())
        assert all(r["status"] == "proved" for r in g.verify_squares())
        for i in range(4):
            for j in range(4):
                assert g.h[j] * g.v[i] == g.v[i] * g.h[j]
        _stable(diagonal_system(g), rng, 100)
        rep = build_laleche([2, 3], [5, 7, 97], 3)
        assert rep.ok
        lg = rep.grid
        assert (lg.rows, lg.cols) == (2, 2)
        assert all(r["status"] == "proved" for r in lg.verify_edges() + lg.verify_squares())
        _stable(diagonal_system(lg), rng, 100)


def test_criterion_09_probe():
    with criterion(9, "state probe of D reaches 10^6 at n = 12", 1):
        v = state_sup_probe(interval_D(new_block(2, 7, 10, 3)), 1, 10 ** 6)
        assert v.status == "proved" and v.witness == 12
        assert F(10, 3) ** 11 < 10 ** 6 < F(10, 3) ** 12


def _cli(*args):
    return subprocess.Popen([sys.executable, "-m", "rankone", *args],
                            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)


def _strip_time(text):
    return re.sub(r'"timestamp": "[^"]*"', '"timestamp": ""', text)


def test_criterion_10_determinism_and_exit_codes():
    with criterion(10, "verify-all reports identical modulo timestamp; fault gives exit 1", 5):
        runs = [_cli("verify-all"), _cli("verify-all"), _cli("verify-all", "--inject-fault")]
        (a, _), (b, _), (c, err) = [p.communicate(timeout=60) for p in runs]
        codes = [p.returncode for p in runs]
        assert codes == [0, 0, 1], (codes, err)
        assert _strip_time(a) == _strip_time(b)
        bad = [r for r in json.loads(c)["records"] if r["status"] == "refuted"]
        assert bad and all(r["witness"] is not None for r in bad)


if __name__ == "__main__":
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q"]))
