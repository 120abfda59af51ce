"""Row-product coefficients d_theta and the product expansion they drive.

The reassembly sweep at full range lives in test_acceptance; here the goldens
and the structural properties run on small shapes so failures localize.
"""

import pytest

from pieri_forge.errors import DomainError
from pieri_forge.partitions import Partition, partitions_of, partitions_upto
from pieri_forge.pieri import d_coeff, pieri_expand, pieri_u
from pieri_forge.ratfun import QT, RatFun

q = RatFun.var(QT, "q")
t = RatFun.var(QT, "t")
one = RatFun.one(QT)


def test_u_vector_goldens():
    # u_k = q^(lam_k - r) t^(n - k)
    assert pieri_u(Partition((1,)), 1) == (one,)
    assert pieri_u(Partition((2, 1)), 0) == (q**2 * t, q)
    assert pieri_u(Partition((1, 1)), 1) == (t, one)
    assert pieri_u(Partition(()), 3) == ()


def test_u_vector_laurent_when_r_exceeds_parts():
    # r > lam_n gives negative q powers; still exact monomials
    (u1,) = pieri_u(Partition((1,)), 3)
    assert u1 == q**-2


def test_d_at_zero_is_one():
    for lam in [(), (1,), (2, 1), (3, 1, 1), (2, 2)]:
        for r in range(3):
            u = pieri_u(Partition(lam), r)
            assert d_coeff((0,) * len(u), u) == one


def test_d_golden_single_box():
    u = pieri_u(Partition((1,)), 1)
    expect = ((one - t) * (one - q**2)) / ((one - q) * (one - q * t))
    assert d_coeff((1,), u) == expect


def test_d_length_mismatch():
    u = pieri_u(Partition((2, 1)), 1)
    with pytest.raises(DomainError):
        d_coeff((1,), u)


def test_expand_trivial_cases():
    ex = pieri_expand(Partition((1,)), 0)
    assert [(tm.index, tm.coeff) for tm in ex.terms] == [(Partition((1,)), one)]
    assert ex.discarded == []
    # empty lam: product is just g_r, a single one-row term
    ex = pieri_expand(Partition(()), 2)
    assert [(tm.index, tm.coeff) for tm in ex.terms] == [(Partition((2,)), one)]


def test_expand_single_box_golden():
    ex = pieri_expand(Partition((1,)), 1)
    got = {tm.index: tm.coeff for tm in ex.terms}
    d11 = ((one - t) * (one - q**2)) / ((one - q) * (one - q * t))
    assert got == {Partition((1, 1)): one, Partition((2,)): d11}


def test_expand_logs_nonzero_discard():
    # lam=(1), r=2, theta=0 puts the raw index (1, 2): coefficient 1 but not
    # a partition, so it is dropped and recorded
    ex = pieri_expand(Partition((1,)), 2)
    assert {tm.index for tm in ex.terms} == {Partition((3,)), Partition((2, 1))}
    assert ((1, 2), one) in ex.discarded


def is_horizontal_strip(lam, mu):
    """mu/lam adds at most one cell per column."""
    lc, mc = lam.conjugate(), mu.conjugate()
    n = max(lc.length, mc.length)
    return all(0 <= mc.part(j) - lc.part(j) <= 1 for j in range(1, n + 1))


def test_surviving_support_is_horizontal_strips():
    for lam in partitions_upto(5):
        for r in range(4):
            ex = pieri_expand(lam, r)
            for tm in ex.terms:
                mu = tm.index
                assert mu.weight == lam.weight + r
                assert not tm.coeff.is_zero()
                assert all(
                    mu.part(i) >= lam.part(i) for i in range(1, lam.length + 1)
                )
                assert is_horizontal_strip(lam, mu)


def test_strip_count_matches_combinatorics():
    # the number of surviving terms equals the number of horizontal strips
    for lam in partitions_upto(4):
        for r in range(4):
            ex = pieri_expand(lam, r)
            strips = {
                mu
                for mu in partitions_of(lam.weight + r)
                if is_horizontal_strip(lam, mu)
            }
            assert {tm.index for tm in ex.terms} == strips


def test_reassembly_small(qt):
    # sum d_theta Q_mu = Q_lam * g_r with everything read from the oracle;
    # the full |lam| <= 6, r <= 3 sweep is acceptance criterion territory
    for lam in partitions_upto(4):
        for r in range(3):
            if lam.weight + r > 6:
                continue
            ex = pieri_expand(lam, r)
            lhs = qt.Q_in_p(lam) * qt.Q_in_p(Partition((r,)))
            acc = None
            for tm in ex.terms:
                piece = qt.Q_in_p(tm.index).scale(tm.coeff)
                acc = piece if acc is None else acc + piece
            assert acc is not None
            assert (acc - lhs).is_zero()


def test_duplicate_free_and_deterministic():
    ex1 = pieri_expand(Partition((2, 1)), 2)
    ex2 = pieri_expand(Partition((2, 1)), 2)
    assert [tm.index for tm in ex1.terms] == [tm.index for tm in ex2.terms]
    assert len({tm.index for tm in ex1.terms}) == len(ex1.terms)
