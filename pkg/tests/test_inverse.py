"""Inverse transition coefficients and the f/g orthogonality certificate.

The full certificate ranges (n=2 box (2,2), n=3 box (1,1,1)) cost minutes
and run in test_acceptance; this file keeps the per-entry goldens and the
cheap corners of the sweep.
"""

import pytest

from pieri_forge.errors import DomainError, SpecializationError
from pieri_forge.inverse import (
    c_ab,
    c_alpha,
    f_entry,
    g_entry,
    orthogonality_check,
    orthogonality_sweep,
)
from pieri_forge.pieri import d_coeff
from pieri_forge.ratfun import ALPHA, QT, RatFun, qt_with_symbols

q = RatFun.var(QT, "q")
t = RatFun.var(QT, "t")
one = RatFun.one(QT)
alpha = RatFun.var(ALPHA, "alpha")
aone = RatFun.one(ALPHA)


# ---------------------------------------------------------------------------
# c^(a,b)


def test_c_ab_zero_theta_is_one():
    assert c_ab((), (), q, t) == one
    assert c_ab((0,), (one,), q, t) == one
    assert c_ab((0, 0, 0), (q, t, one), q, t) == one
    # symbolic u as well
    ctx = qt_with_symbols(2)
    u = (RatFun.var(ctx, "u1"), RatFun.var(ctx, "u2"))
    assert c_ab((0, 0), u, RatFun.var(ctx, "q"), RatFun.var(ctx, "t")).is_one()


def test_c_ab_golden_n1():
    got = c_ab((1,), (one,), q, t)
    assert got == -((one + q) * (one - t)) / (one - q * t)


def test_c_ab_golden_n2_zero_row():
    # theta_1 = 0 exercises the Vandermonde-row replacement; the value is
    # the same single-box coefficient as in the n=1 case
    got = c_ab((0, 1), (t, one), q, t)
    assert got == -((one + q) * (one - t)) / (one - q * t)


def test_c_ab_golden_n2_first_row():
    got = c_ab((1, 0), (t, one), q, t)
    expect = -((one - t**2) * (one - q**2 * t)) / ((one - q * t) * (one - q * t**2))
    assert got == expect


def test_c_ab_length_mismatch():
    with pytest.raises(DomainError):
        c_ab((1,), (one, t), q, t)


def test_c_ab_removable_singularity_resolved():
    # u = (1, 1) with theta = (1, 1) collides the v's; the direct order hits
    # 0/0 but the generic-u evaluation has a finite limit, so a value comes
    # back instead of an error
    got = c_ab((1, 1), (one, one), q, t)
    assert got is not None
    ctx = qt_with_symbols(2)
    u1, u2 = RatFun.var(ctx, "u1"), RatFun.var(ctx, "u2")
    sym = c_ab((1, 1), (u1, u2), RatFun.var(ctx, "q"), RatFun.var(ctx, "t"))
    from pieri_forge.ratfun import substitute

    assert substitute(sym, {"u1": 1, "u2": 1}, QT) == got


def test_c_ab_genuine_singularity_raises():
    # 1 - q t u vanishes identically at u = (qt)^-1: not removable
    with pytest.raises(SpecializationError) as ei:
        c_ab((1,), ((q * t) ** -1,), q, t)
    assert ei.value.context  # carries the offending bindings


# ---------------------------------------------------------------------------
# c^(alpha)


def test_c_alpha_zero_theta_is_one():
    assert c_alpha((), (), aone / alpha) == aone
    assert c_alpha((0, 0), (alpha, aone), aone / alpha) == aone


def test_c_alpha_golden():
    got = c_alpha((1,), (RatFun.zero(ALPHA),), aone / alpha)
    assert got == -(2 * aone) / (alpha + 1)


def test_c_alpha_n2_matches_generic_substitution():
    are = c_alpha((1, 0), (aone / alpha, RatFun.zero(ALPHA)), aone / alpha)
    ctx = ALPHA.extended(("u1", "u2"))
    from pieri_forge.ratfun import substitute

    u1, u2 = RatFun.var(ctx, "u1"), RatFun.var(ctx, "u2")
    a = RatFun.one(ctx) / RatFun.var(ctx, "alpha")
    sym = c_alpha((1, 0), (u1, u2), a)
    back = substitute(sym, {"u1": aone / alpha, "u2": 0}, ALPHA)
    assert back == are


# ---------------------------------------------------------------------------
# the f/g matrix pair


def test_f_entry_diagonal_and_triangularity():
    assert f_entry((2, 1), (2, 1)).is_one()
    assert f_entry((1, 0), (0, 1)).is_zero()
    assert f_entry((0,), (1,)).is_zero()
    with pytest.raises(DomainError):
        f_entry((1,), (0, 0))


def test_g_entry_diagonal_and_triangularity():
    assert g_entry((3,), (3,)).is_one()
    assert g_entry((0, 2), (1, 0)).is_zero()
    with pytest.raises(DomainError):
        g_entry((1, 1), (0,))


def test_g_entry_is_d_at_shifted_u():
    # at gamma = 0 the shift vanishes: g_(kappa,0) = d_kappa(u)
    ctx = qt_with_symbols(1)
    u = (RatFun.var(ctx, "u1"),)
    assert g_entry((1,), (0,), ctx) == d_coeff((1,), u)
    assert g_entry((2,), (0,), ctx) == d_coeff((2,), u)


def test_n1_first_column_cancellation():
    # orthogonality at (beta, gamma) = ((1,), (0,)) reduces to f_10 = -g_10
    assert f_entry((1,), (0,)) == -g_entry((1,), (0,))


# ---------------------------------------------------------------------------
# orthogonality certificate (cheap corners)


def test_orthogonality_diagonal():
    assert orthogonality_check(1, (2,), (2,))
    assert orthogonality_check(2, (1, 1), (1, 1))


def test_orthogonality_gamma_not_below_beta():
    # empty sum against a zero target
    assert orthogonality_check(1, (1,), (2,))
    assert orthogonality_check(2, (1, 0), (0, 1))


def test_orthogonality_n1_cases():
    assert orthogonality_check(1, (1,), (0,))
    assert orthogonality_check(1, (2,), (0,))
    assert orthogonality_check(1, (3,), (1,))


def test_orthogonality_n2_case():
    assert orthogonality_check(2, (1, 1), (0, 0))


def test_orthogonality_both_orders_n1():
    # inverse matrices commute; check the reversed product too
    for beta in ((1,), (2,)):
        for gamma in ((0,), (1,)):
            assert orthogonality_check(1, beta, gamma, both=True)


def test_orthogonality_depth_guard():
    with pytest.raises(DomainError):
        orthogonality_check(1, (3,), (0,), depth=2)
    with pytest.raises(DomainError):
        orthogonality_check(2, (1,), (0,))  # wrong index length


def test_orthogonality_sweep_small():
    assert orthogonality_sweep(1, 2) == []
    assert orthogonality_sweep(2, 1) == []


def test_orthogonality_sweep_rejects_bad_args():
    with pytest.raises(DomainError):
        orthogonality_sweep(0, 1)
    with pytest.raises(DomainError):
        orthogonality_sweep(1, -1)
