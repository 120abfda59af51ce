"""Row-multiplication coefficients for the deformed basis Q.

The product Q_lam * g_r re-expands in the Q basis with coefficients given
by a closed product formula evaluated at a monomial specialization u that
depends only on lam and r.  This module exposes the specialization, the
raw coefficient evaluator d_coeff (usable at symbolic u as well), and the
assembled single-row expansion.
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .errors import DomainError, SpecializationError
from .partitions import Partition, enum_box
from .ratfun import QT, FieldCtx, RatFun, pochhammer

__all__ = [
    "PieriContext",
    "PieriTerm",
    "PieriExpansion",
    "pieri_u",
    "d_coeff",
    "pieri_expand",
]


@dataclass(frozen=True)
class PieriContext:
    """Record of one row-multiplication setup: Q_lam * g_row over ctx."""

    lam: Partition
    row: int
    ctx: FieldCtx = QT

    def u(self) -> Tuple[RatFun, ...]:
        return pieri_u(self.lam, self.row, self.ctx)


def pieri_u(lam, r: int, ctx: FieldCtx = QT) -> Tuple[RatFun, ...]:
    """Specialization u_k = q^(lam_k - r) * t^(n-k), k = 1..n, n = len(lam).

    Exponents of q may be negative; the values are Laurent monomials.
    """
    lam = Partition(lam)
    if r < 0:
        raise DomainError("negative row length %d" % r)
    n = len(lam)
    return tuple(
        RatFun.monomial(ctx, {"q": lam.part(k) - r, "t": n - k})
        for k in range(1, n + 1)
    )


def d_coeff(theta: Sequence[int], u: Sequence[RatFun]) -> RatFun:
    """Evaluate the product-form coefficient d_theta(u).

    theta is a composition in N^n; u supplies n values from a common context
    containing variables q and t.  The empty composition gives 1.  A u at
    which some denominator factor vanishes raises SpecializationError.
    """
    theta = tuple(int(x) for x in theta)
    if any(x < 0 for x in theta):
        raise DomainError("negative part in composition %r" % (theta,))
    n = len(theta)
    if len(u) != n:
        raise DomainError("composition length %d vs %d values" % (n, len(u)))
    if n == 0:
        return RatFun.one(QT)
    ctx = u[0].ctx
    q = RatFun.var(ctx, "q")
    t = RatFun.var(ctx, "t")
    T = sum(theta)
    try:
        out = RatFun.one(ctx)
        for k in range(n):
            tk = theta[k]
            if tk == 0:
                continue
            out = out * pochhammer(t, q, tk) / pochhammer(q, q, tk)
            out = out * pochhammer(q ** (T + 1) * u[k], q, tk)
            out = out / pochhammer(q**T * t * u[k], q, tk)
        for i in range(n):
            ti = theta[i]
            if ti == 0:
                continue
            for j in range(i + 1, n):
                rat = u[i] / u[j]
                tj = theta[j]
                out = out * pochhammer(t * rat, q, ti) / pochhammer(q * rat, q, ti)
                out = out * pochhammer(q ** (1 - tj) * rat / t, q, ti)
                out = out / pochhammer(q ** (-tj) * rat, q, ti)
    except DomainError as exc:
        raise SpecializationError(
            "coefficient d_theta undefined at this u",
            theta=theta,
            u=tuple(str(x) for x in u),
        ) from exc
    return out


@dataclass(frozen=True)
class PieriTerm:
    index: Partition
    coeff: RatFun


@dataclass
class PieriExpansion:
    """Q_lam * g_row = sum of coeff * Q_index over the surviving terms.

    discarded records (raw_index, coeff) pairs whose raw index failed to be
    a partition; they are dropped from the product by convention and kept
    here so callers can audit the pruning.
    """

    lam: Partition
    row: int
    terms: List[PieriTerm] = field(default_factory=list)
    discarded: List[Tuple[Tuple[int, ...], RatFun]] = field(default_factory=list)


def pieri_expand(lam, r: int, ctx: FieldCtx = QT) -> PieriExpansion:
    """Expand Q_lam * g_r in the Q basis.

    Terms are indexed by compositions theta with |theta| <= r; the raw new
    index is (lam + theta, r - |theta|).  Raw indices that are not
    partitions are discarded (and logged on the result); the surviving
    terms are exactly the horizontal-strip extensions of lam.
    """
    lam = Partition(lam)
    exp = PieriExpansion(lam=lam, row=r)
    u = pieri_u(lam, r, ctx)
    n = len(lam)
    for theta in enum_box(n, r):
        c = d_coeff(theta, u) if n else RatFun.one(ctx)
        if not c:
            continue
        raw = tuple(lam.part(k + 1) + theta[k] for k in range(n)) + (r - sum(theta),)
        idx = Partition.from_seq(raw)
        if idx is None:
            exp.discarded.append((raw, c))
            continue
        exp.terms.append(PieriTerm(index=idx, coeff=c))
    return exp
