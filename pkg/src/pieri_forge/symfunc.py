"""Symmetric functions over an exact coefficient field.

A SymFun is a finite linear combination of basis elements indexed by
partitions, with RatFun coefficients, in one of four bases:

* p: power sums (the internal hub; all conversions route through it)
* m: monomial symmetric functions
* e: elementary symmetric functions
* g: modified complete functions, the one-row members of the deformed
     dual basis; their expansion depends on the field (q,t vs alpha)

p, e, g are multiplicative, so products there are index-multiset unions;
m-products convert through p.  Scalar products are diagonal in p with the
deformed weights z_lam * prod (1-q^{lam_i})/(1-t^{lam_i}) (qt mode) or
z_lam * alpha^{l(lam)} (alpha mode).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from ._rat import ONE, RAT, ZERO, rat
from .errors import ContextError, DomainError
from .kernel import mul as _dict_mul
from .partitions import Partition, partitions_of
from .ratfun import ALPHA, QT, FieldCtx, RatFun

BASES = ("p", "m", "e", "g")

_lock = threading.RLock()
_plist_cache: dict[int, list[Partition]] = {}
_pm_cache: dict[int, tuple] = {}
_pe_cache: dict[int, list] = {}
_gk_cache: dict[tuple, "SymFun"] = {}
_ek_cache: dict[tuple, "SymFun"] = {}
_hk_cache: dict[tuple, "SymFun"] = {}
_pg_cache: dict[tuple, list] = {}


def mode_of(ctx: FieldCtx) -> str:
    """'qt' or 'alpha', inferred from the variables present."""
    names = set(ctx.names)
    if "q" in names and "t" in names:
        return "qt"
    if "alpha" in names:
        return "alpha"
    raise DomainError("context %r has neither (q,t) nor alpha" % (ctx.names,))


def _as_partition(key) -> Partition:
    return key if isinstance(key, Partition) else Partition(key)


class SymFun:
    """Finite exact linear combination of basis elements."""

    __slots__ = ("ctx", "basis", "coeffs")

    def __init__(self, ctx: FieldCtx, basis: str, coeffs: Mapping = ()):
        if basis not in BASES:
            raise DomainError("unknown basis %r" % (basis,))
        clean: dict[Partition, RatFun] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for key, val in items:
            lam = _as_partition(key)
            if not isinstance(val, RatFun):
                val = RatFun.const(ctx, val)
            elif val.ctx != ctx:
                raise ContextError("coefficient context mismatch")
            if val.is_zero():
                continue
            if lam in clean:
                val = clean[lam] + val
                if val.is_zero():
                    del clean[lam]
                    continue
            clean[lam] = val
        self.ctx = ctx
        self.basis = basis
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx, basis: str = "p") -> "SymFun":
        return cls(ctx, basis, {})

    @classmethod
    def one(cls, ctx: FieldCtx, basis: str = "p") -> "SymFun":
        return cls(ctx, basis, {Partition(()): RatFun.one(ctx)})

    @classmethod
    def basis_element(cls, ctx: FieldCtx, basis: str, lam) -> "SymFun":
        return cls(ctx, basis, {_as_partition(lam): RatFun.one(ctx)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> list[Partition]:
        return sorted(self.coeffs, key=lambda p: p.parts)

    def coefficient(self, lam) -> RatFun:
        return self.coeffs.get(_as_partition(lam), RatFun.zero(self.ctx))

    def degree(self) -> int:
        return max((lam.weight for lam in self.coeffs), default=0)

    def homogeneous_component(self, d: int) -> "SymFun":
        return SymFun(
            self.ctx,
            self.basis,
            {lam: c for lam, c in self.coeffs.items() if lam.weight == d},
        )

    def is_homogeneous(self) -> bool:
        weights = {lam.weight for lam in self.coeffs}
        return len(weights) <= 1

    # -- linear arithmetic -------------------------------------------------

    def _check(self, other: "SymFun"):
        if self.ctx != other.ctx:
            raise ContextError("SymFun context mismatch")
        if self.basis != other.basis:
            raise DomainError(
                "basis mismatch %r vs %r; convert first" % (self.basis, other.basis)
            )

    def __add__(self, other: "SymFun") -> "SymFun":
        self._check(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            s = out.get(lam)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(lam, None)
            else:
                out[lam] = s
        return SymFun(self.ctx, self.basis, out)

    def __neg__(self) -> "SymFun":
        return SymFun(self.ctx, self.basis, {l: -c for l, c in self.coeffs.items()})

    def __sub__(self, other: "SymFun") -> "SymFun":
        return self + (-other)

    def scale(self, factor) -> "SymFun":
        if not isinstance(factor, RatFun):
            factor = RatFun.const(self.ctx, factor)
        if factor.is_zero():
            return SymFun.zero(self.ctx, self.basis)
        return SymFun(
            self.ctx, self.basis, {l: c * factor for l, c in self.coeffs.items()}
        )

    # -- products ----------------------------------------------------------

    def __mul__(self, other: "SymFun") -> "SymFun":
        if not isinstance(other, SymFun):
            return NotImplemented
        if self.ctx != other.ctx:
            raise ContextError("SymFun context mismatch")
        a, b = self, other
        if a.basis == b.basis and a.basis in ("p", "e", "g"):
            basis = a.basis
        else:
            basis = "p"
            a = a.convert("p")
            b = b.convert("p")
        out: dict[Partition, RatFun] = {}
        for lam, ca in a.coeffs.items():
            for mu, cb in b.coeffs.items():
                key = Partition(sorted(lam.parts + mu.parts, reverse=True))
                c = ca * cb
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return SymFun(self.ctx, basis, out)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SymFun):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.basis == other.basis
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(
            (self.ctx.names, self.basis, frozenset(self.coeffs.items()))
        )

    def __repr__(self):
        if not self.coeffs:
            return "SymFun<0>"
        bits = []
        for lam in self.support():
            bits.append("(%s)*%s[%s]" % (self.coeffs[lam], self.basis, lam))
        return "SymFun<%s>" % " + ".join(bits)

    # -- conversions -------------------------------------------------------

    def convert(self, target: str) -> "SymFun":
        if target not in BASES:
            raise DomainError("unknown basis %r" % (target,))
        if target == self.basis:
            return self
        in_p = _to_p(self)
        if target == "p":
            return in_p
        return _from_p(in_p, target)


# ---------------------------------------------------------------------------
# fixed partition order and p<->m integer matrices, cached per degree
# ---------------------------------------------------------------------------


def _plist(d: int) -> list[Partition]:
    with _lock:
        got = _plist_cache.get(d)
        if got is None:
            got = list(partitions_of(d))
            _plist_cache[d] = got
        return got


def _power_monomial_dict(lam: Partition, nvars: int) -> dict:
    """p_lam expanded as a polynomial dict over nvars variables."""
    out = {(0,) * nvars: ONE}
    for part in lam.parts:
        p_dict = {}
        for i in range(nvars):
            e = [0] * nvars
            e[i] = part
            p_dict[tuple(e)] = ONE
        out = _dict_mul(out, p_dict)
    return out


def _pm_matrices(d: int):
    """(plist, P2M, M2P) at degree d.

    P2M[i][j]: integer coefficient of m_{plist[j]} in p_{plist[i]}, read off
    a brute-force expansion over d variables.  M2P is its exact inverse.
    """
    with _lock:
        got = _pm_cache.get(d)
        if got is not None:
            return got
        plist = _plist(d)
        size = len(plist)
        nvars = max(d, 1)
        index = {lam: j for j, lam in enumerate(plist)}
        P2M = []
        for lam in plist:
            expanded = _power_monomial_dict(lam, nvars)
            row = [ZERO] * size
            for mu in plist:
                row[index[mu]] = expanded.get(mu.padded(nvars), ZERO)
            P2M.append(row)
        M2P = _invert_rational(P2M)
        got = (plist, P2M, M2P)
        _pm_cache[d] = got
        return got


def _invert_rational(M):
    """Exact inverse of a square matrix with rational entries."""
    size = len(M)
    aug = [[RAT(x) for x in row] + [ONE if i == j else ZERO for j in range(size)]
           for i, row in enumerate(M)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col]), None)
        if piv is None:
            raise DomainError("singular conversion matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


# ---------------------------------------------------------------------------
# one-row expansions in p: e_k, h_k (parameter-free), g_k (field-dependent)
# ---------------------------------------------------------------------------


def e_in_p(ctx: FieldCtx, k: int) -> SymFun:
    """Elementary e_k in the p-basis via the Newton recurrence.

    Negative k yields the zero function: expansion sums index e_{r-|theta|}
    freely and rely on vanishing below zero.
    """
    if k < 0:
        return SymFun.zero(ctx)
    key = (ctx.names, k)
    with _lock:
        got = _ek_cache.get(key)
        if got is not None:
            return got
    if k == 0:
        out = SymFun.one(ctx)
    else:
        acc = SymFun.zero(ctx)
        for i in range(1, k + 1):
            term = SymFun.basis_element(ctx, "p", (i,)) * e_in_p(ctx, k - i)
            acc = acc + (term if i % 2 == 1 else -term)
        out = acc.scale(RatFun.const(ctx, RAT(1, k)))
    with _lock:
        _ek_cache[key] = out
    return out


def h_in_p(ctx: FieldCtx, k: int) -> SymFun:
    """Complete homogeneous h_k in the p-basis (oracle-side helper)."""
    if k < 0:
        raise DomainError("negative subscript %d" % k)
    key = (ctx.names, k)
    with _lock:
        got = _hk_cache.get(key)
        if got is not None:
            return got
    if k == 0:
        out = SymFun.one(ctx)
    else:
        acc = SymFun.zero(ctx)
        for i in range(1, k + 1):
            acc = acc + SymFun.basis_element(ctx, "p", (i,)) * h_in_p(ctx, k - i)
        out = acc.scale(RatFun.const(ctx, RAT(1, k)))
    with _lock:
        _hk_cache[key] = out
    return out


def _g_weight(ctx: FieldCtx, mode: str, m: int) -> RatFun:
    """The p_m coefficient weight in the g generating series."""
    if mode == "qt":
        q = RatFun.var(ctx, "q")
        t = RatFun.var(ctx, "t")
        one = RatFun.one(ctx)
        return (one - t**m) / (one - q**m)
    return RatFun.one(ctx) / RatFun.var(ctx, "alpha")


def g_in_p(ctx: FieldCtx, k: int, mode: Optional[str] = None) -> SymFun:
    """Modified complete g_k in the p-basis.

    Satisfies k*g_k = sum_{m=1}^{k} w_m p_m g_{k-m} with w_m the deformed
    series weight; degenerates to h_k when the weights are all 1.  Negative
    k yields the zero function, mirroring e_in_p.
    """
    if k < 0:
        return SymFun.zero(ctx)
    mode = mode or mode_of(ctx)
    key = (ctx.names, mode, k)
    with _lock:
        got = _gk_cache.get(key)
        if got is not None:
            return got
    if k == 0:
        out = SymFun.one(ctx)
    else:
        acc = SymFun.zero(ctx)
        for m in range(1, k + 1):
            term = SymFun.basis_element(ctx, "p", (m,)) * g_in_p(ctx, k - m, mode)
            acc = acc + term.scale(_g_weight(ctx, mode, m))
        out = acc.scale(RatFun.const(ctx, RAT(1, k)))
    with _lock:
        _gk_cache[key] = out
    return out


def _product_in_p(ctx: FieldCtx, lam: Partition, one_row) -> SymFun:
    out = SymFun.one(ctx)
    for part in lam.parts:
        out = out * one_row(ctx, part)
    return out


# ---------------------------------------------------------------------------
# conversion plumbing through the p hub
# ---------------------------------------------------------------------------


def _to_p(f: SymFun) -> SymFun:
    if f.basis == "p":
        return f
    ctx = f.ctx
    out = SymFun.zero(ctx)
    if f.basis == "m":
        by_degree: dict[int, dict[Partition, RatFun]] = {}
        for lam, c in f.coeffs.items():
            by_degree.setdefault(lam.weight, {})[lam] = c
        for d, comp in by_degree.items():
            plist, _, M2P = _pm_matrices(d)
            index = {lam: i for i, lam in enumerate(plist)}
            acc: dict[Partition, RatFun] = {}
            for lam, c in comp.items():
                row = M2P[index[lam]]
                for j, entry in enumerate(row):
                    if entry:
                        mu = plist[j]
                        add = c * entry
                        s = acc.get(mu)
                        s = add if s is None else s + add
                        acc[mu] = s
            out = out + SymFun(ctx, "p", acc)
        return out
    one_row = {"e": e_in_p, "g": g_in_p}[f.basis]
    for lam, c in f.coeffs.items():
        out = out + _product_in_p(ctx, lam, one_row).scale(c)
    return out


def _from_p(f: SymFun, target: str) -> SymFun:
    ctx = f.ctx
    if target == "m":
        out = SymFun.zero(ctx, "m")
        by_degree: dict[int, dict[Partition, RatFun]] = {}
        for lam, c in f.coeffs.items():
            by_degree.setdefault(lam.weight, {})[lam] = c
        for d, comp in by_degree.items():
            plist, P2M, _ = _pm_matrices(d)
            index = {lam: i for i, lam in enumerate(plist)}
            acc: dict[Partition, RatFun] = {}
            for lam, c in comp.items():
                row = P2M[index[lam]]
                for j, entry in enumerate(row):
                    if entry:
                        mu = plist[j]
                        add = c * entry
                        s = acc.get(mu)
                        s = add if s is None else s + add
                        acc[mu] = s
            out = out + SymFun(ctx, "m", acc)
        return out
    if target == "e":
        return _solve_against_products(f, "e", lambda d: _pe_matrix(f.ctx, d))
    if target == "g":
        return _solve_against_products(f, "g", lambda d: _pg_matrix(f.ctx, d))
    raise DomainError("unknown basis %r" % (target,))


def _pe_matrix(ctx: FieldCtx, d: int):
    """Inverse of the (e_mu in p) matrix at degree d; entries are plain
    rationals, so the cache is context-free."""
    with _lock:
        got = _pe_cache.get(d)
        if got is not None:
            return got
    plist = _plist(d)
    index = {lam: i for i, lam in enumerate(plist)}
    rows = []
    for mu in plist:
        expansion = _product_in_p(ctx, mu, e_in_p)
        row = [ZERO] * len(plist)
        for lam, c in expansion.coeffs.items():
            row[index[lam]] = c.as_scalar()
        rows.append(row)
    # E[mu][lam] = coeff of p_lam in e_mu; transition p->e needs its inverse
    inv = _invert_rational(rows)
    with _lock:
        _pe_cache[d] = inv
    return inv


def _pg_matrix(ctx: FieldCtx, d: int):
    """Inverse of the (g_mu in p) matrix at degree d over the field ctx."""
    mode = mode_of(ctx)
    key = (ctx.names, mode, d)
    with _lock:
        got = _pg_cache.get(key)
        if got is not None:
            return got
    plist = _plist(d)
    index = {lam: i for i, lam in enumerate(plist)}
    rows = []
    for mu in plist:
        expansion = _product_in_p(ctx, mu, g_in_p)
        row = [RatFun.zero(ctx)] * len(plist)
        for lam, c in expansion.coeffs.items():
            row[index[lam]] = c
        rows.append(row)
    inv = _invert_field(rows, ctx)
    with _lock:
        _pg_cache[key] = inv
    return inv


def _invert_field(M, ctx: FieldCtx):
    size = len(M)
    zero = RatFun.zero(ctx)
    one = RatFun.one(ctx)
    aug = [list(row) + [one if i == j else zero for j in range(size)]
           for i, row in enumerate(M)]
    for col in range(size):
        piv = next((r for r in range(col, size) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise DomainError("singular conversion matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def _solve_against_products(f: SymFun, target: str, matrix_for_degree):
    """Map a p-basis SymFun through a cached inverse transition matrix."""
    ctx = f.ctx
    out = SymFun.zero(ctx, target)
    by_degree: dict[int, dict[Partition, RatFun]] = {}
    for lam, c in f.coeffs.items():
        by_degree.setdefault(lam.weight, {})[lam] = c
    for d, comp in by_degree.items():
        inv = matrix_for_degree(d)
        plist = _plist(d)
        index = {lam: i for i, lam in enumerate(plist)}
        acc: dict[Partition, RatFun] = {}
        # row vector (coeffs over p) times inverse of the (target in p) matrix
        for lam, c in comp.items():
            j = index[lam]
            for i, mu in enumerate(plist):
                entry = inv[j][i]
                if not entry:
                    continue
                add = c * entry
                s = acc.get(mu)
                s = add if s is None else s + add
                acc[mu] = s
        out = out + SymFun(ctx, target, acc)
    return out


# ---------------------------------------------------------------------------
# scalar products and the omega involution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerScalarDiag:
    """Diagonal data of the deformed power-sum scalar product at one
    partition: the centralizer order and both deformation factors."""

    lam: Partition
    z: int
    qt_factor: RatFun
    alpha_factor: RatFun

    @classmethod
    def for_partition(cls, lam) -> "PowerScalarDiag":
        lam = _as_partition(lam)
        return cls(
            lam=lam,
            z=lam.z(),
            qt_factor=_weight_factor(QT, "qt", lam),
            alpha_factor=_weight_factor(ALPHA, "alpha", lam),
        )


def _weight_factor(ctx: FieldCtx, mode: str, lam: Partition) -> RatFun:
    if mode == "qt":
        q = RatFun.var(ctx, "q")
        t = RatFun.var(ctx, "t")
        one = RatFun.one(ctx)
        out = RatFun.one(ctx)
        for part in lam.parts:
            out = out * ((one - q**part) / (one - t**part))
        return out
    return RatFun.var(ctx, "alpha") ** lam.length


def power_weight(ctx: FieldCtx, lam, mode: Optional[str] = None) -> RatFun:
    """z_lam times the deformation factor, as a RatFun over ctx."""
    lam = _as_partition(lam)
    mode = mode or mode_of(ctx)
    return _weight_factor(ctx, mode, lam) * lam.z()


def scalar(f: SymFun, g: SymFun, mode: Optional[str] = None) -> RatFun:
    """Deformed power-sum scalar product; diagonal in the p-basis."""
    if f.ctx != g.ctx:
        raise ContextError("scalar product needs a common context")
    ctx = f.ctx
    mode = mode or mode_of(ctx)
    fp = f.convert("p")
    gp = g.convert("p")
    small, large = (fp, gp) if len(fp.coeffs) <= len(gp.coeffs) else (gp, fp)
    out = RatFun.zero(ctx)
    for lam, cf in small.coeffs.items():
        cg = large.coeffs.get(lam)
        if cg is not None:
            out = out + cf * cg * power_weight(ctx, lam, mode)
    return out


def omega_qt(f: SymFun, *, swap: bool = False) -> SymFun:
    """The deformed omega involution on a qt-mode SymFun.

    Acts on p_r by (-1)^(r-1) (1-q^r)/(1-t^r); with swap=True the q,t roles
    reverse, giving the inverse map.  Sends g_n to e_n.
    """
    ctx = f.ctx
    if mode_of(ctx) != "qt":
        raise DomainError("omega_qt needs a (q,t) context")
    q = RatFun.var(ctx, "q")
    t = RatFun.var(ctx, "t")
    if swap:
        q, t = t, q
    one = RatFun.one(ctx)
    fp = f.convert("p")
    out: dict[Partition, RatFun] = {}
    factor_cache: dict[int, RatFun] = {}

    def factor(r: int) -> RatFun:
        got = factor_cache.get(r)
        if got is None:
            got = (one - q**r) / (one - t**r)
            if r % 2 == 0:
                got = -got
            factor_cache[r] = got
        return got

    for lam, c in fp.coeffs.items():
        for part in lam.parts:
            c = c * factor(part)
        out[lam] = c
    return SymFun(ctx, "p", out)
