import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import oracles
from rankone import intervals as iv
from rankone.embed import DirectedSystem, LimitElement, StageMap, build_grid, diagonal_system
from rankone.intcone import IntegerCone
from rankone.intervals import Component, Interval, Verdict
from rankone.ratcone import interval_D, new_block

B = new_block(2, 7, 10, 3)
D = interval_D(B)


def test_verdict_validation():
    with pytest.raises(ValueError):
        Verdict("c", "refuted")
    with pytest.raises(ValueError):
        Verdict("c", "verified_to_bound")
    with pytest.raises(ValueError):
        Verdict("c", "maybe")
    rec = Verdict("c", "refuted", witness=F(1, 3)).to_record()
    assert rec == {"claim": "c", "status": "refuted", "bound": None, "witness": "1/3", "note": ""}


def test_sum_examples():
    DD = iv.sum(D, D)
    assert [DD.generator(n) for n in (1, 2)] == [F(20, 3), F(200, 9)]
    Z = iv.constant(B, F(0))
    assert [iv.sum(D, Z).generator(n) for n in (1, 2, 3)] == [D.generator(n) for n in (1, 2, 3)]
    X = Interval(B, lambda n: B.e(n) + B.e(n + 1), 1)
    assert X.generator(1) == F(10, 3) + F(100, 9)


def test_scale_examples():
    assert iv.scale(1, D).generator(3) == D.generator(3)
    two = iv.scale(2, D)
    assert [two.generator(1), two.generator(2)] == [F(20, 3), F(200, 9)]
    with pytest.raises(ValueError):
        iv.scale(0, D)


def test_scale_distributes_over_sum():
    X = Interval(B, lambda n: B.e(n + 1), 1)
    left = iv.scale(3, iv.sum(D, X))
    right = iv.sum(iv.scale(3, D), iv.scale(3, X))
    assert all(left.generator(n) == right.generator(n) for n in range(1, 6))


def test_scale_is_repeated_sum():
    for t in range(1, 5):
        acc = D
        for _ in range(t - 1):
            acc = iv.sum(acc, D)
        assert all(iv.scale(t, D).generator(n) == acc.generator(n) for n in range(1, 6))


def test_non_monotone_sequences_are_rejected():
    X = Interval(B, lambda n: B.e(5 - n), 0)
    with pytest.raises(ValueError):
        X.generator(3)


def test_contains_up_to_examples():
    v = iv.contains_up_to(D, F(2, 3), 3)
    assert v.status == "proved"
    # least n with e_n - 2/3 a member, by the independent table
    scale, tab = oracles.block_members(2, 7, 10, 3, 3)
    want = next(n for n in range(1, 4) if tab[int((B.e(n) - F(2, 3)) * scale)])
    assert v.witness == want == 1
    # 7/3 is in M, yet e_n - 7/3 stays outside M along the checked prefix
    assert not any(tab[int((B.e(n) - F(7, 3)) * scale)] for n in range(1, 4))
    assert iv.contains_up_to(D, F(7, 3), 3).status == "verified_to_bound"
    v = iv.contains_up_to(D, 10, 10)
    assert v.status == "verified_to_bound" and v.bound == 10 and v.claim == "10 not in D"
    assert iv.contains_up_to(D, D.generator(2), 7).witness == 2


def test_contains_up_to_rejects_non_members():
    # 1 is not in M for this block, so it cannot lie in the interval D either
    with pytest.raises(ValueError):
        iv.contains_up_to(D, 1, 3)


members = st.builds(lambda a, j: F(a, 3 ** j), st.integers(0, 600), st.integers(0, 3)).filter(
    B.contains_direct)


@given(members, members)
def test_order_hereditary(x, y):
    lo, hi = min(x, y), max(x, y)
    if not B.le(lo, hi):
        return
    if iv.contains_up_to(D, hi, 8).status == "proved":
        assert iv.contains_up_to(D, lo, 8).status == "proved"


def _column_to_diagonal():
    g = build_grid("cons", {"A": IntegerCone([2, 5]), "q1": 2, "p1": 7, "q2": 3, "p2": 7}, 3, 3)
    col = DirectedSystem([g[i, 0] for i in range(4)], g.v)
    diag = diagonal_system(g)
    psi = StageMap(col, diag, lambda i: math.prod(g.h[:i]), "psi")
    assert all(res.embeds for _, res in psi.verify(3))
    return col, diag, psi


def test_pushforward_generators_and_transfer():
    col, diag, psi = _column_to_diagonal()
    b = new_block(2, 7, 7, 3)  # same ladder as the grid column
    X = Interval(col, lambda n: b.ladder_index(b.e(n)), b.D_start, "X")
    Y = iv.pushforward(psi, X)
    for n in range(b.D_start, 3):
        assert Y.generator(n) == psi.apply(X.generator(n))
    rng = random.Random(3)
    for _ in range(40):
        i = rng.randint(0, 2)
        v = rng.randint(0, 3 * col.stage(i).conductor)
        x = LimitElement(i, v)
        if not col.positive(x):
            continue
        if iv.contains_up_to(X, x, 3).status == "proved":
            assert iv.contains_up_to(Y, psi.apply(x), 3).status == "proved"


def test_pushforward_needs_verified_map():
    col, diag, _ = _column_to_diagonal()
    raw = StageMap(col, diag, lambda i: 1, "raw")
    with pytest.raises(ValueError):
        iv.pushforward(raw, D)


def test_identity_pushforward():
    class Identity:
        verified, target = True, B

        @staticmethod
        def apply(x):
            return x

    Y = iv.pushforward(Identity, D)
    assert [Y.generator(n) for n in (1, 2, 3)] == [D.generator(n) for n in (1, 2, 3)]


def test_softness_of_D():
    v = iv.is_soft(D, 6)
    assert v.status == "verified_to_bound"
    i, n, k = v.details[0]
    assert i == 1 and k <= 4
    assert B.le((n + 1) * B.e(1), n * B.e(k))
    # the multiplier r works as well
    assert any(B.le(4 * B.e(1), 3 * B.e(k)) for k in range(1, 5))


def test_zero_interval_is_soft():
    v = iv.is_soft(iv.constant(B, F(0)), 3)
    assert v.status == "verified_to_bound" and v.details[0][1] == 1


def test_bounded_interval_is_not_soft():
    X = iv.constant(Component(IntegerCone([2, 5])), 2)
    v = iv.is_soft(X, 10)
    assert v.status == "verified_to_bound" and "not soft" in v.claim and v.witness == 0


def test_state_probe_examples():
    v = iv.state_sup_probe(D, 1, 10 ** 6)
    assert v.status == "proved" and v.witness == 12
    assert F(10, 3) ** 11 < 10 ** 6 < F(10, 3) ** 12
    assert iv.state_sup_probe(D, 1, 0).witness == 1
    v = iv.state_sup_probe(iv.constant(Component(IntegerCone([2, 5])), 5), 5, 2, bound=50)
    assert v.status == "verified_to_bound" and v.bound == 50


def test_scaled_D_covers_samples_and_those_are_soft():
    rD = iv.scale(B.r, D)
    rng = random.Random(11)
    gens = [F(k, 3) for k in (2, 5)] + [F(k, 3) * B.e(1) for k in (3, 7)]
    for _ in range(30):
        x = sum((rng.choice(gens) for _ in range(rng.randint(1, 4))), F(0))
        v = iv.contains_up_to(rD, x, 12)
        assert v.status == "proved"
        y = rD.generator(v.witness)
        # x <= r e_k and (r+1) e_k <= r e_{k'} for a later k'
        assert any(B.le((B.r + 1) * y, B.r * iv.scale(B.r, D).generator(k))
                   for k in range(v.witness, v.witness + 4))
