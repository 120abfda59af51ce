"""Expansion of Q into g-products and P into e-products.

Two families of operations share this module:

* one-step peels: expand_Q_step strips the last part of the index,
  emitting terms coeff * g_row * Q_tail; expand_P_step strips the
  largest-part multiplicity, emitting coeff * e_row * P_tail;
  jack_step does the same over Q(alpha).
* full expansions: expand_full drives the peel to the ground, returning
  a pure linear combination of g-products (or e-products).  Strategy
  "recursive" literally iterates the step; "direct" enumerates
  lower-triangular integer matrices, one row per peel level, and builds
  each chain's coefficient as a product of per-level step coefficients.
  The two strategies must agree term for term after like-term
  collection, and the tests enforce that.

Raw indices produced by the formulas can fail to be partitions on the
g side (a part overtakes its left neighbour) or go negative on the e
side (a multiplicity is pushed below zero).  Such terms are dropped and
logged on the expansion's discard list; every oracle verification run
re-certifies that convention by reproducing the target exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

from .errors import DomainError
from .inverse import c_ab, c_alpha
from .partitions import LTMatrix, Partition, enum_box, enum_ltm_bases
from .ratfun import ALPHA, QT, FieldCtx, RatFun
from .symfunc import SymFun, e_in_p, g_in_p

MODES = ("mac-g", "mac-e", "jack-g", "jack-e")
STEP_KINDS = ("QxQrow", "PxE")
PRODUCT_KINDS = ("gProduct", "eProduct")


def _mode_parts(mode: str) -> Tuple[str, str]:
    if mode not in MODES:
        raise DomainError("unknown mode %r; expected one of %s" % (mode, (MODES,)))
    flavor, side = mode.split("-")
    return flavor, side


def mode_ctx(mode: str) -> FieldCtx:
    return QT if _mode_parts(mode)[0] == "mac" else ALPHA


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


# ---------------------------------------------------------------------------
# terms and expansions


@dataclass(frozen=True)
class ExpTerm:
    """One summand of an expansion.

    kind QxQrow / PxE: index is (tail partition, peeled subscript) and the
    term reads coeff * g_row * Q_tail (resp. coeff * e_row * P_tail).
    kind gProduct / eProduct: index is the partition of subscripts and the
    term reads coeff * prod_k g_{index_k} (resp. e).  Zero subscripts are
    never stored: g_0 = e_0 = 1.
    """

    coeff: RatFun
    kind: str
    index: Union[Partition, Tuple[Partition, int]]

    def __post_init__(self):
        if self.kind not in STEP_KINDS + PRODUCT_KINDS:
            raise DomainError("unknown term kind %r" % (self.kind,))
        if self.kind in STEP_KINDS:
            tail, row = self.index
            if not isinstance(tail, Partition) or row < 0:
                raise DomainError("step term needs (Partition, row >= 0)")
        elif not isinstance(self.index, Partition):
            raise DomainError("product term index must be a Partition")

    def degree(self) -> int:
        if self.kind in STEP_KINDS:
            tail, row = self.index
            return tail.weight + row
        return self.index.weight


@dataclass(frozen=True)
class DiscardRecord:
    """A dropped raw index.

    stage locates the peel that produced it; coeff is the step coefficient
    when it was evaluated, None when the chain was dropped before any
    evaluation (direct strategy skips dead chains early).
    """

    stage: str
    raw: Tuple[int, ...]
    coeff: Optional[RatFun] = None

    def __repr__(self):
        return "DiscardRecord(%s, raw=%r)" % (self.stage, self.raw)


@dataclass(frozen=True)
class Expansion:
    source: Partition
    mode: str
    terms: Tuple[ExpTerm, ...]
    discarded: Tuple[DiscardRecord, ...] = ()
    strategy: Optional[str] = None

    def __post_init__(self):
        w = self.source.weight
        for tm in self.terms:
            if tm.degree() != w:
                raise DomainError(
                    "inhomogeneous term %r in expansion of %s" % (tm, self.source)
                )

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def ctx(self) -> FieldCtx:
        return mode_ctx(self.mode)

    def coefficient(self, index, row: Optional[int] = None) -> RatFun:
        """Coefficient of g/e-product `index`, or of (tail, row) when row
        is given (step expansions)."""
        if row is None:
            key = _as_partition(index)
            for tm in self.terms:
                if tm.kind in PRODUCT_KINDS and tm.index == key:
                    return tm.coeff
        else:
            key = (_as_partition(index), row)
            for tm in self.terms:
                if tm.kind in STEP_KINDS and tm.index == key:
                    return tm.coeff
        return RatFun.zero(self.ctx)


# ---------------------------------------------------------------------------
# per-level step coefficients
#
# A peel level is determined by the partition being peeled and the theta row
# applied to it; both strategies and all repeat visits share this cache.


@lru_cache(maxsize=None)
def _step_coeff(flavor: str, side: str, parts: Tuple[int, ...], row: Tuple[int, ...]) -> RatFun:
    n = len(row)
    if side == "g":
        # parts has length n+1; u_k compares part k against the last part
        if len(parts) != n + 1:
            raise DomainError("g-side peel needs length %d, got %r" % (n + 1, parts))
        last = parts[-1]
        if flavor == "mac":
            u = tuple(
                RatFun.monomial(QT, {"q": parts[k - 1] - last, "t": n - k})
                for k in range(1, n + 1)
            )
            return c_ab(row, u, RatFun.var(QT, "q"), RatFun.var(QT, "t"))
        u = []
        for k in range(1, n + 1):
            uk = RatFun.const(ALPHA, parts[k - 1] - last)
            if n - k:
                uk = uk + RatFun.monomial(ALPHA, {"alpha": -1}, n - k)
            u.append(uk)
        return c_alpha(row, tuple(u), RatFun.var(ALPHA, "alpha", -1))
    # e side: parts at most n+1; u_k tracks the tail multiplicity sums
    if parts and parts[0] > n + 1:
        raise DomainError("e-side peel at n=%d needs parts <= %d" % (n, n + 1))
    m = [sum(1 for p in parts if p == j) for j in range(1, n + 2)]
    if flavor == "mac":
        u = tuple(
            RatFun.monomial(QT, {"q": n - k, "t": sum(m[k - 1 : n])})
            for k in range(1, n + 1)
        )
        return c_ab(row, u, RatFun.var(QT, "t"), RatFun.var(QT, "q"))
    u = []
    for k in range(1, n + 1):
        uk = RatFun.const(ALPHA, sum(m[k - 1 : n]))
        if n - k:
            uk = uk + RatFun.monomial(ALPHA, {"alpha": 1}, n - k)
        u.append(uk)
    return c_alpha(row, tuple(u), RatFun.var(ALPHA, "alpha"))


@lru_cache(maxsize=None)
def _step_terms(flavor: str, side: str, parts: Tuple[int, ...], n: int):
    """All one-peel terms for the partition `parts`.

    Returns (valid, dropped): valid is a tuple of (coeff, row, tail_parts),
    dropped a tuple of (raw, coeff) for non-partition / negative raw
    indices.  Exact zero coefficients are omitted from both.
    """
    valid = []
    dropped = []
    if side == "g":
        if len(parts) != n + 1:
            raise DomainError("g-side step needs length %d, got %r" % (n + 1, parts))
        budget = parts[-1]
        for theta in enum_box(n, budget):
            coeff = _step_coeff(flavor, "g", parts, theta)
            if coeff.is_zero():
                continue
            raw = tuple(parts[k] + theta[k] for k in range(n))
            row = budget - sum(theta)
            tail = Partition.from_seq(raw)
            if tail is None:
                dropped.append((raw, coeff))
            else:
                valid.append((coeff, row, tail.parts))
        return tuple(valid), tuple(dropped)
    if parts and parts[0] > n + 1:
        raise DomainError("e-side step at n=%d needs parts <= %d" % (n, n + 1))
    m = [sum(1 for p in parts if p == j) for j in range(1, n + 2)]
    for theta in enum_box(n, m[n]):
        coeff = _step_coeff(flavor, "e", parts, theta)
        if coeff.is_zero():
            continue
        row = m[n] - sum(theta)
        if n:
            raw = tuple(
                m[i - 1] + theta[i - 1] - theta[i] if i < n else m[n - 1] + m[n] + theta[n - 1]
                for i in range(1, n + 1)
            )
        else:
            raw = ()
        if any(x < 0 for x in raw):
            dropped.append((raw, coeff))
            continue
        tail_parts = []
        for i in range(len(raw), 0, -1):
            tail_parts.extend([i] * raw[i - 1])
        valid.append((coeff, row, tuple(tail_parts)))
    return tuple(valid), tuple(dropped)


def _default_n(side: str, parts: Tuple[int, ...]) -> int:
    if side == "g":
        return max(len(parts) - 1, 0)
    return max((parts[0] if parts else 0) - 1, 0)


# ---------------------------------------------------------------------------
# public one-step operations


def _step_expansion(lam: Partition, flavor: str, side: str, n: int) -> Expansion:
    if lam.length == 0:
        raise DomainError("nothing to peel from the empty partition")
    kind = "QxQrow" if side == "g" else "PxE"
    mode = "%s-%s" % (flavor, side)
    valid, dropped = _step_terms(flavor, side, lam.parts, n)
    terms = tuple(ExpTerm(coeff, kind, (Partition(tail), row)) for coeff, row, tail in valid)
    disc = tuple(DiscardRecord("peel %s" % (lam,), raw, coeff) for raw, coeff in dropped)
    return Expansion(lam, mode, terms, disc)


def expand_Q_step(lam) -> Expansion:
    """One peel of the last part: Q_lam as a sum of coeff * g_row * Q_tail.

    For a single-row index the sum collapses to the term 1 * g_{lam_1}.
    """
    lam = _as_partition(lam)
    return _step_expansion(lam, "mac", "g", lam.length - 1 if lam.length else 0)


def expand_P_step(lam, n: Optional[int] = None) -> Expansion:
    """One peel of the largest-part multiplicity: P_lam as a sum of
    coeff * e_row * P_tail.

    n + 1 bounds the parts; by default n is the largest part minus one, so
    the peel removes exactly the top multiplicity.  A larger n pads the
    multiplicity vector with zeros, which is valid and occasionally useful
    for cross-checks.
    """
    lam = _as_partition(lam)
    if n is None:
        n = _default_n("e", lam.parts)
    elif n < 0 or (lam.parts and lam.parts[0] > n + 1):
        raise DomainError("need n >= largest part - 1")
    return _step_expansion(lam, "mac", "e", n)


def jack_step(lam, mode: str) -> Expansion:
    """One peel over Q(alpha); mode 'g' mirrors expand_Q_step, 'e' mirrors
    expand_P_step with the default n."""
    if mode not in ("g", "e"):
        raise DomainError("jack_step mode must be 'g' or 'e'")
    lam = _as_partition(lam)
    return _step_expansion(lam, "jack", mode, _default_n(mode, lam.parts))


# ---------------------------------------------------------------------------
# full expansions


def _merge_sub(subs: Tuple[int, ...], row: int) -> Tuple[int, ...]:
    if row == 0:
        return subs
    return tuple(sorted(subs + (row,), reverse=True))


@lru_cache(maxsize=None)
def _peel(flavor: str, side: str, parts: Tuple[int, ...]):
    """Fully peeled product for `parts`, like-terms collected.

    Returns a tuple of (subscripts, coeff) pairs, subscripts descending
    with zeros dropped, pairs in ascending lex order.
    """
    if not parts:
        one = RatFun.one(QT if flavor == "mac" else ALPHA)
        return (((), one),)
    out: dict = {}
    valid, _ = _step_terms(flavor, side, parts, _default_n(side, parts))
    for coeff, row, tail in valid:
        for subs, tailc in _peel(flavor, side, tail):
            key = _merge_sub(subs, row)
            c = coeff * tailc
            acc = out.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
    return tuple(sorted(out.items()))


def _collect_discards(flavor: str, side: str, parts: Tuple[int, ...]):
    """Discard records from every peel node reachable from `parts`, in
    deterministic first-visit order."""
    seen = set()
    records = []

    def visit(ps):
        if not ps or ps in seen:
            return
        seen.add(ps)
        valid, dropped = _step_terms(flavor, side, ps, _default_n(side, ps))
        stage = "peel %s" % (Partition(ps),)
        for raw, coeff in dropped:
            records.append(DiscardRecord(stage, raw, coeff))
        for _, _, tail in valid:
            visit(tail)

    visit(parts)
    return tuple(records)


def _chain_g(lam: Partition, flavor: str, theta: LTMatrix, n: int):
    """Evaluate one matrix chain on the g side.

    Returns (subs, coeff) or a DiscardRecord for a chain whose intermediate
    index leaves the partition cone.
    """
    # mu(theta, k)_i = lam_i + sum_{j>k} theta(j, i), length k+1
    mus = {
        k: tuple(lam.part(i) + theta.tail_col_sum(k, i) for i in range(1, k + 2))
        for k in range(n + 1)
    }
    for k in range(n - 1, 0, -1):
        mu = mus[k]
        if any(mu[i] < mu[i + 1] for i in range(k)):
            return DiscardRecord(
                "chain rows=%r peel k=%d" % (theta.rows, k + 1), mu, None
            )
    coeff = RatFun.one(QT if flavor == "mac" else ALPHA)
    subs = [lam.part(1) + theta.tail_col_sum(0, 1)]
    for k in range(n, 0, -1):
        row = theta.row(k)
        c = _step_coeff(flavor, "g", mus[k], row)
        if c.is_zero():
            return None
        coeff = coeff * c
        subs.append(mus[k][k] - sum(row))
    return tuple(s for s in subs if s), coeff


def _chain_e(lam: Partition, flavor: str, theta: LTMatrix, n: int):
    """Evaluate one matrix chain on the e side (multiplicity coordinates)."""
    m = [lam.multiplicity(j) for j in range(1, n + 2)]
    # mu(theta, k) as a multiplicity vector (m_1 .. m_{k+1})
    mus = {}
    for k in range(n + 1):
        head = [
            m[i - 1] + theta.tail_col_sum(k, i) - theta.tail_col_sum(k, i + 1)
            for i in range(1, k + 1)
        ]
        head.append(sum(m[k:]) + theta.tail_col_sum(k, k + 1))
        mus[k] = tuple(head)
    for k in range(n - 1, 0, -1):
        mu = mus[k]
        if any(x < 0 for x in mu[:k]):
            return DiscardRecord(
                "chain rows=%r peel k=%d" % (theta.rows, k + 1), mu, None
            )
    coeff = RatFun.one(QT if flavor == "mac" else ALPHA)
    subs = [mus[0][0]]
    for k in range(n, 0, -1):
        mu = mus[k]
        parts = []
        for i in range(k + 1, 0, -1):
            parts.extend([i] * mu[i - 1])
        row = theta.row(k)
        c = _step_coeff(flavor, "e", tuple(parts), row)
        if c.is_zero():
            return None
        coeff = coeff * c
        subs.append(mu[k] - sum(row))
    return tuple(s for s in subs if s), coeff


def _direct(flavor: str, side: str, lam: Partition):
    n = _default_n(side, lam.parts)
    if side == "g":
        bases = lam.padded(n + 1)[1:]
        chain = _chain_g
    else:
        m = [lam.multiplicity(j) for j in range(1, n + 2)]
        bases = tuple(sum(m[k:]) for k in range(1, n + 1))
        chain = _chain_e
    out: dict = {}
    disc = []
    for theta in enum_ltm_bases(n, bases):
        res = chain(lam, flavor, theta, n)
        if res is None:
            continue
        if isinstance(res, DiscardRecord):
            disc.append(res)
            continue
        subs, coeff = res
        key = tuple(sorted(subs, reverse=True))
        acc = out.get(key)
        coeff = coeff if acc is None else acc + coeff
        if coeff.is_zero():
            out.pop(key, None)
        else:
            out[key] = coeff
    return tuple(sorted(out.items())), tuple(disc)


def expand_full(lam, mode: str, strategy: str = "recursive") -> Expansion:
    """Complete expansion into pure g-products (modes *-g) or e-products
    (modes *-e).

    Both strategies produce identical term lists; "recursive" memoizes
    shared sub-peels, "direct" walks the triangular-matrix enumeration and
    is the ground truth the recursion is tested against.
    """
    lam = _as_partition(lam)
    flavor, side = _mode_parts(mode)
    if strategy == "recursive":
        pairs = _peel(flavor, side, lam.parts)
        disc = _collect_discards(flavor, side, lam.parts)
    elif strategy == "direct":
        pairs, disc = _direct(flavor, side, lam)
    else:
        raise DomainError("strategy must be 'recursive' or 'direct'")
    kind = "gProduct" if side == "g" else "eProduct"
    terms = tuple(ExpTerm(coeff, kind, Partition(subs)) for subs, coeff in pairs)
    return Expansion(lam, mode, terms, disc, strategy=strategy)


def products_to_symfun(exp: Expansion, basis: str = "p") -> SymFun:
    """Evaluate a product expansion as an explicit symmetric function.

    Step expansions cannot be evaluated here: their Q/P tails are defined
    by orthogonality, not by a formula, and live in the oracle.
    """
    ctx = exp.ctx
    builder = {"gProduct": g_in_p, "eProduct": e_in_p}
    total = SymFun.zero(ctx)
    for tm in exp.terms:
        if tm.kind not in builder:
            raise DomainError("cannot evaluate a %s term directly" % (tm.kind,))
        prod = SymFun.one(ctx)
        for s in tm.index:
            prod = prod * builder[tm.kind](ctx, s)
        total = total + prod.scale(tm.coeff)
    if basis == "p":
        return total
    return total.convert(basis)
