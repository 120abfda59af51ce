"""Inverse row-multiplication coefficients and their orthogonality pairing.

The coefficients here are the two-parameter family c_ab (for the q,t world)
and its one-parameter confluent form c_alpha (for the Jack world).  Both are
a closed product prefactor times a ratio det(M)/Vandermonde(v), where v is a
shifted copy of the argument vector u.

Evaluation order matters on rows with theta_i = 0: the shifted value v_i
collides with u_i and a factor of the matrix entry degenerates to 0/0.  The
convention used throughout (and the one that makes the orthogonality
identity hold) is that such a row is the plain Vandermonde row
[v_i^(n-1), ..., v_i, 1].  Rows with theta_i >= 1 never degenerate at the
specializations produced by the expansion layer; a vanishing denominator at
some other u raises SpecializationError, and the public entry points then
retry by evaluating at generic symbolic u and substituting, so a removable
singularity still yields the finite value.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct
from math import factorial
from typing import Optional, Sequence, Tuple

from .errors import DomainError, SpecializationError
from .ratfun import FieldCtx, RatFun, det, qt_with_symbols, substitute

__all__ = [
    "InvContext",
    "c_ab",
    "c_alpha",
    "f_entry",
    "g_entry",
    "orthogonality_check",
    "orthogonality_sweep",
]


@dataclass(frozen=True)
class InvContext:
    """Snapshot of one inverse-coefficient evaluation, for error reports."""

    kind: str
    theta: Tuple[int, ...]
    u: Tuple[str, ...]
    scalars: Tuple[str, ...]

    def as_context(self) -> dict:
        return {
            "kind": self.kind,
            "theta": self.theta,
            "u": self.u,
            "scalars": self.scalars,
        }


def _checked_theta(theta) -> Tuple[int, ...]:
    theta = tuple(int(x) for x in theta)
    if any(x < 0 for x in theta):
        raise DomainError("negative part in composition %r" % (theta,))
    return theta


def _fresh_symbols(base: FieldCtx, n: int) -> Tuple[str, ...]:
    names = []
    taken = set(base.names)
    k = 1
    while len(names) < n:
        cand = "w%d" % k
        k += 1
        if cand not in taken:
            names.append(cand)
            taken.add(cand)
    return tuple(names)


def _generic_retry(direct, theta, u, scalars, err: SpecializationError) -> RatFun:
    """Re-evaluate at symbolic u, then substitute the numeric values.

    Resolves removable singularities of the direct evaluation order.  If the
    substituted denominator still vanishes the singularity is genuine and
    the original error is re-raised from the new one.
    """
    n = len(theta)
    base = u[0].ctx
    names = _fresh_symbols(base, n)
    ext = base.extended(names)
    sym_u = tuple(RatFun.var(ext, nm) for nm in names)
    lifted = tuple(substitute(s, {}, ext) for s in scalars)
    generic = direct(theta, sym_u, *lifted)
    try:
        return substitute(generic, dict(zip(names, u)), base)
    except SpecializationError as exc:
        raise exc from err


def c_ab(theta: Sequence[int], u: Sequence[RatFun], a: RatFun, b: RatFun) -> RatFun:
    """Two-parameter inverse coefficient c^(a,b)_theta(u).

    theta in N^n, u a vector of n values over a common context, a and b
    scalars over the same context.  theta = 0 gives 1.
    """
    theta = _checked_theta(theta)
    if len(u) != len(theta):
        raise DomainError(
            "composition length %d vs %d values" % (len(theta), len(u))
        )
    if not any(theta):
        return RatFun.one(a.ctx)
    try:
        return _c_ab_direct(theta, u, a, b)
    except SpecializationError as err:
        return _generic_retry(_c_ab_direct, theta, u, (a, b), err)


def _fold_poch(out: RatFun, x: RatFun, base: RatFun, k: int, numerator: bool) -> RatFun:
    """Multiply or divide out by (x; base)_k one binomial atom at a time.

    Folding atoms singly keeps every gcd inside the rational arithmetic a
    small-against-large problem; assembling the full product first would
    force large-against-large reductions.
    """
    one = RatFun.one(out.ctx)
    xb = x
    for _ in range(k):
        atom = one - xb
        out = out * atom if numerator else out / atom
        xb = xb * base
    return out


def _c_ab_direct(theta, u, a, b) -> RatFun:
    n = len(theta)
    ctx = a.ctx
    one = RatFun.one(ctx)
    inv = InvContext(
        kind="ab",
        theta=theta,
        u=tuple(str(x) for x in u),
        scalars=(str(a), str(b)),
    )
    try:
        v = [u[i] * a ** theta[i] for i in range(n)]
        # rows with theta_i >= 1 are cleared by their known denominator
        # D_i = (1 - v_i) prod_k (b u_k - v_i); the determinant of the
        # cleared (polynomial) matrix is divided back down atom by atom
        divisors = []
        M = []
        for i in range(n):
            if theta[i] == 0:
                M.append([v[i] ** (n - 1 - jj) for jj in range(n)])
                continue
            atoms = [one - v[i]] + [b * u[k] - v[i] for k in range(n)]
            D = one
            for f in atoms:
                D = D * f
            N = one - b * v[i]
            for k in range(n):
                N = N * (u[k] - v[i])
            row = []
            bj = one
            for jj in range(n):
                row.append(v[i] ** (n - 1 - jj) * (D - bj * N))
                bj = bj * b
            M.append(row)
            divisors.extend(atoms)
        out = det(M)
        for f in divisors:
            out = out / f
        for i in range(n):
            for j in range(i + 1, n):
                out = out / (v[i] - v[j])
        for k in range(n):
            tk = theta[k]
            if tk == 0:
                continue
            out = out * b**tk
            out = _fold_poch(out, a / b, a, tk, True)
            out = _fold_poch(out, a, a, tk, False)
            out = _fold_poch(out, a * u[k], a, tk, True)
            out = _fold_poch(out, a * b * u[k], a, tk, False)
        for i in range(n):
            ti = theta[i]
            if ti == 0:
                continue
            for j in range(i + 1, n):
                tj = theta[j]
                out = _fold_poch(out, a * u[i] / (b * u[j]), a, ti, True)
                out = _fold_poch(out, a * u[i] / u[j], a, ti, False)
                out = _fold_poch(out, a ** (-tj) * b * u[i] / u[j], a, ti, True)
                out = _fold_poch(out, a ** (-tj) * u[i] / u[j], a, ti, False)
        return out
    except DomainError as exc:
        raise SpecializationError(
            "inverse coefficient undefined at this u", **inv.as_context()
        ) from exc


def c_alpha(theta: Sequence[int], u: Sequence[RatFun], a: RatFun) -> RatFun:
    """One-parameter (Jack) inverse coefficient c^(a)_theta(u)."""
    theta = _checked_theta(theta)
    if len(u) != len(theta):
        raise DomainError(
            "composition length %d vs %d values" % (len(theta), len(u))
        )
    if not any(theta):
        return RatFun.one(a.ctx)
    try:
        return _c_alpha_direct(theta, u, a)
    except SpecializationError as err:
        return _generic_retry(_c_alpha_direct, theta, u, (a,), err)


def _fold_rising(out: RatFun, x: RatFun, k: int, numerator: bool) -> RatFun:
    """Multiply or divide out by (x)_k = x (x+1) ... (x+k-1), atomwise."""
    for i in range(k):
        atom = x + i
        out = out * atom if numerator else out / atom
    return out


def _c_alpha_direct(theta, u, a) -> RatFun:
    n = len(theta)
    ctx = a.ctx
    one = RatFun.one(ctx)
    inv = InvContext(
        kind="alpha",
        theta=theta,
        u=tuple(str(x) for x in u),
        scalars=(str(a),),
    )
    try:
        v = [u[i] + theta[i] for i in range(n)]
        # same row-clearing scheme as the (a,b) form, with
        # D_i = v_i prod_k (v_i - u_k - a)
        divisors = []
        M = []
        for i in range(n):
            if theta[i] == 0:
                M.append([v[i] ** (n - 1 - jj) for jj in range(n)])
                continue
            atoms = [v[i]] + [v[i] - u[k] - a for k in range(n)]
            D = one
            for f in atoms:
                D = D * f
            N = v[i] + a
            for k in range(n):
                N = N * (v[i] - u[k])
            row = []
            for jj in range(n):
                p = n - 1 - jj
                row.append(v[i] ** p * D - (v[i] - a) ** p * N)
            M.append(row)
            divisors.extend(atoms)
        out = det(M)
        for f in divisors:
            out = out / f
        for i in range(n):
            for j in range(i + 1, n):
                out = out / (v[i] - v[j])
        for k in range(n):
            tk = theta[k]
            if tk == 0:
                continue
            out = _fold_rising(out, one - a, tk, True) / factorial(tk)
            out = _fold_rising(out, u[k] + 1, tk, True)
            out = _fold_rising(out, u[k] + 1 + a, tk, False)
        for i in range(n):
            ti = theta[i]
            if ti == 0:
                continue
            for j in range(i + 1, n):
                tj = theta[j]
                d = u[i] - u[j]
                out = _fold_rising(out, d + 1 - a, ti, True)
                out = _fold_rising(out, d + 1, ti, False)
                out = _fold_rising(out, d - tj + a, ti, True)
                out = _fold_rising(out, d - tj, ti, False)
        return out
    except DomainError as exc:
        raise SpecializationError(
            "inverse coefficient undefined at this u", **inv.as_context()
        ) from exc


# ---------------------------------------------------------------------------
# orthogonality pairing at generic symbolic u
# ---------------------------------------------------------------------------


def f_entry(
    beta: Sequence[int], kappa: Sequence[int], ctx: Optional[FieldCtx] = None
) -> RatFun:
    """Upper-triangular matrix entry f_(beta,kappa) at generic u.

    Zero unless beta - kappa is componentwise nonnegative.  The context
    defaults to (q, t, u1..un) with n = len(beta).
    """
    beta = _checked_theta(beta)
    kappa = _checked_theta(kappa)
    n = len(beta)
    if len(kappa) != n:
        raise DomainError("length mismatch %r vs %r" % (beta, kappa))
    if ctx is None:
        ctx = qt_with_symbols(n)
    if any(b < k for b, k in zip(beta, kappa)):
        return RatFun.zero(ctx)
    theta = tuple(b - k for b, k in zip(beta, kappa))
    q = RatFun.var(ctx, "q")
    t = RatFun.var(ctx, "t")
    s = sum(kappa)
    u = tuple(
        RatFun.var(ctx, "u%d" % (i + 1)) * q ** (kappa[i] + s) for i in range(n)
    )
    return c_ab(theta, u, q, t)


def g_entry(
    kappa: Sequence[int], gamma: Sequence[int], ctx: Optional[FieldCtx] = None
) -> RatFun:
    """Companion matrix entry g_(kappa,gamma) at generic u.

    Zero unless kappa - gamma is componentwise nonnegative.
    """
    from .pieri import d_coeff

    kappa = _checked_theta(kappa)
    gamma = _checked_theta(gamma)
    n = len(kappa)
    if len(gamma) != n:
        raise DomainError("length mismatch %r vs %r" % (kappa, gamma))
    if ctx is None:
        ctx = qt_with_symbols(n)
    if any(k < g for k, g in zip(kappa, gamma)):
        return RatFun.zero(ctx)
    theta = tuple(k - g for k, g in zip(kappa, gamma))
    q = RatFun.var(ctx, "q")
    s = sum(gamma)
    u = tuple(
        RatFun.var(ctx, "u%d" % (i + 1)) * q ** (gamma[i] + s) for i in range(n)
    )
    return d_coeff(theta, u)


@lru_cache(maxsize=None)
def _f_cached(n: int, beta: Tuple[int, ...], kappa: Tuple[int, ...]) -> RatFun:
    return f_entry(beta, kappa, qt_with_symbols(n))


@lru_cache(maxsize=None)
def _g_cached(n: int, kappa: Tuple[int, ...], gamma: Tuple[int, ...]) -> RatFun:
    return g_entry(kappa, gamma, qt_with_symbols(n))


def orthogonality_check(
    n: int,
    beta: Sequence[int],
    gamma: Sequence[int],
    depth: Optional[int] = None,
    both: bool = False,
) -> bool:
    """Exact orthogonality of the f and g matrices at one index pair.

    Checks sum_kappa f_(beta,kappa) g_(kappa,gamma) = delta_(beta,gamma),
    summing over gamma <= kappa <= beta componentwise, with all entries as
    rational functions in (q, t, u1..un).  depth, when given, bounds the
    admissible parts.  both=True also checks the product in the opposite
    order, which roughly doubles the cost.
    """
    beta = _checked_theta(beta)
    gamma = _checked_theta(gamma)
    if len(beta) != n or len(gamma) != n:
        raise DomainError("indices must have length n = %d" % n)
    if depth is not None and any(x > depth for x in beta + gamma):
        raise DomainError("index part exceeds depth bound %d" % depth)
    ctx = qt_with_symbols(n)
    zero = RatFun.zero(ctx)
    one = RatFun.one(ctx)
    target = one if beta == gamma else zero
    if any(g > b for g, b in zip(gamma, beta)):
        return target == zero
    fg = zero
    gf = zero
    for kappa in _iproduct(*(range(g, b + 1) for g, b in zip(gamma, beta))):
        fg = fg + _f_cached(n, beta, kappa) * _g_cached(n, kappa, gamma)
        if both:
            gf = gf + _g_cached(n, beta, kappa) * _f_cached(n, kappa, gamma)
    if both and gf != target:
        return False
    return fg == target


def orthogonality_sweep(n: int, depth: int, both: bool = False):
    """Run orthogonality_check over every pair in the box {0..depth}^n.

    Returns the list of failing (beta, gamma) pairs; empty means the whole
    box certifies.
    """
    if n < 1 or depth < 0:
        raise DomainError("need n >= 1 and depth >= 0")
    box = list(_iproduct(range(depth + 1), repeat=n))
    failures = []
    for beta in box:
        for gamma in box:
            if not orthogonality_check(n, beta, gamma, depth, both):
                failures.append((beta, gamma))
    return failures
