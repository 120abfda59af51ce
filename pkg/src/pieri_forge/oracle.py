"""Gram-Schmidt oracle for P and Q, and the verification harness.

The oracle never touches the expansion formulas.  It builds P_lam from
first principles: monic in m_lam, supported on dominance-smaller
monomials, orthogonal to every P_mu with mu strictly dominated, under
the deformed power-sum scalar product of the active mode.  Q is the
dual normalization P / <P, P>.  Because the construction shares no code
with the Pieri / inverse-Pieri machinery, agreement between the two is
strong evidence for both.

verify_expansion closes the loop: expand, map everything back to the
m-basis, subtract the oracle's answer, and report the residual exactly.
degeneration_checks anchors the oracle itself against classical facts
(Schur functions at q = t, the omega involution).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .errors import DomainError
from .expand import (
    Expansion,
    expand_P_step,
    expand_Q_step,
    expand_full,
    jack_step,
    mode_ctx,
    products_to_symfun,
    _mode_parts,
)
from .partitions import Partition, dominance_leq, partitions_of
from .ratfun import ALPHA, QT, FieldCtx, RatFun, substitute
from .symfunc import SymFun, e_in_p, g_in_p, h_in_p, mode_of, omega_qt, power_weight, scalar


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


class _WeightTable:
    """All P's of one weight, by sequential orthogonal projection.

    Partitions of weight d are processed in ascending lex, a linear
    extension of dominance.  Each P_i starts as m_i and subtracts its
    projection onto P_j for every strictly dominated mu_j, which leaves it
    monic, dominance-triangular, and orthogonal to the dominated family;
    <P_i, P_i> falls out of the construction.  Projecting against
    incomparable predecessors would subtract exact zeros, so they are
    skipped; the test suite certifies full pairwise orthogonality by
    brute-force scalar products, independent of this shortcut.

    Inner products happen in p-coordinates, where the scalar product is
    diagonal: against an m-basis vector they cost only scaled additions,
    because m has constant p-coordinates.  The projection itself updates
    only the m-coordinates (small supports, reduced coefficients); the
    p-row is rebuilt afterwards through the constant m-to-p matrix, and
    the norm comes out as <P, m> rather than <P, P>, which keeps every
    heavy product out of the inner loop."""

    __slots__ = ("order", "index", "P_m", "P_p", "norms")

    def __init__(self, ctx: FieldCtx, d: int):
        order = sorted(partitions_of(d), key=lambda p: p.parts)
        n = len(order)
        mp = [
            SymFun.basis_element(ctx, "m", mu).convert("p").coeffs for mu in order
        ]
        weights = {kappa: power_weight(ctx, kappa) for kappa in partitions_of(d)}
        zero = RatFun.zero(ctx)
        one = RatFun.one(ctx)
        P_p: List[Dict[Partition, RatFun]] = []
        P_m: List[Dict[Partition, RatFun]] = []
        wP: List[Dict[Partition, RatFun]] = []  # P_j pointwise times the weights
        norms: List[RatFun] = []
        index = {nu: k for k, nu in enumerate(order)}
        for i, mu in enumerate(order):
            vm = {mu: one}
            for j in range(i):
                if dominance_leq(order[j], mu) is not True:
                    continue
                acc = zero
                for kappa, c in mp[i].items():
                    y = wP[j].get(kappa)
                    if y is not None:
                        acc = acc + c * y
                if acc.is_zero():
                    continue
                cj = acc / norms[j]
                for nu, c in P_m[j].items():
                    cur = vm.get(nu, zero) - cj * c
                    if cur.is_zero():
                        vm.pop(nu, None)
                    else:
                        vm[nu] = cur
            for nu in vm:
                if nu != mu and dominance_leq(nu, mu) is not True:
                    raise DomainError(
                        "internal: projection left %s in the support of P_%s"
                        % (nu, mu)
                    )
            vp: Dict[Partition, RatFun] = {}
            for nu, c in vm.items():
                for kappa, r in mp[index[nu]].items():
                    cur = vp.get(kappa, zero) + c * r
                    if cur.is_zero():
                        vp.pop(kappa, None)
                    else:
                        vp[kappa] = cur
            wv = {kappa: c * weights[kappa] for kappa, c in vp.items()}
            nrm = zero
            for kappa, c in mp[i].items():
                y = wv.get(kappa)
                if y is not None:
                    nrm = nrm + c * y
            if nrm.is_zero():
                raise DomainError("internal: isotropic P at weight %d" % d)
            P_p.append(vp)
            P_m.append(vm)
            wP.append(wv)
            norms.append(nrm)
        self.order = order
        self.index = {mu: i for i, mu in enumerate(order)}
        self.P_m = [SymFun(ctx, "m", vm) for vm in P_m]
        self.P_p = [SymFun(ctx, "p", vp) for vp in P_p]
        self.norms = norms


class Oracle:
    """Per-mode cache of Gram-Schmidt P's, their norms, and Q's."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.mode = mode_of(ctx)
        self._lock = threading.RLock()
        self._tables: Dict[int, _WeightTable] = {}

    def _table(self, d: int) -> _WeightTable:
        with self._lock:
            got = self._tables.get(d)
            if got is None:
                got = _WeightTable(self.ctx, d)
                self._tables[d] = got
            return got

    def P(self, lam) -> SymFun:
        """P_lam in the m-basis: monic, dominance-triangular, orthogonal to
        every strictly dominated P_mu."""
        lam = _as_partition(lam)
        tab = self._table(lam.weight)
        return tab.P_m[tab.index[lam]]

    def P_in_p(self, lam) -> SymFun:
        lam = _as_partition(lam)
        tab = self._table(lam.weight)
        return tab.P_p[tab.index[lam]]

    def norm(self, lam) -> RatFun:
        """<P_lam, P_lam> in the active mode."""
        lam = _as_partition(lam)
        tab = self._table(lam.weight)
        return tab.norms[tab.index[lam]]

    def Q(self, lam) -> SymFun:
        """Q_lam = P_lam / <P_lam, P_lam>, m-basis."""
        lam = _as_partition(lam)
        return self.P(lam).scale(RatFun.one(self.ctx) / self.norm(lam))

    def Q_in_p(self, lam) -> SymFun:
        lam = _as_partition(lam)
        return self.P_in_p(lam).scale(RatFun.one(self.ctx) / self.norm(lam))


_ORACLES = {"qt": Oracle(QT), "alpha": Oracle(ALPHA)}


def oracle(mode: str) -> Oracle:
    """The shared oracle for 'qt' or 'alpha' (also accepts expansion mode
    names like 'mac-g' / 'jack-e')."""
    if mode in _ORACLES:
        return _ORACLES[mode]
    if mode in ("mac-g", "mac-e"):
        return _ORACLES["qt"]
    if mode in ("jack-g", "jack-e"):
        return _ORACLES["alpha"]
    raise DomainError("unknown oracle mode %r" % (mode,))


def gram_schmidt_P(lam, mode: str = "qt") -> SymFun:
    """Oracle P_lam in the m-basis."""
    return oracle(mode).P(lam)


def Q_from_P(P: SymFun, mode: Optional[str] = None) -> SymFun:
    """Rescale a P to its dual element: Q = P / <P, P>."""
    nrm = scalar(P, P, mode)
    if nrm.is_zero():
        raise DomainError("cannot normalize an isotropic element")
    return P.scale(RatFun.one(P.ctx) / nrm)


# ---------------------------------------------------------------------------
# verification harness


@dataclass(frozen=True)
class VerificationReport:
    lam: Partition
    mode: str
    status: str  # "pass" | "fail"
    checks: Tuple[Tuple[str, bool], ...]
    discarded: Tuple = ()
    residual: Optional[SymFun] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __repr__(self):
        flat = ", ".join("%s=%s" % (k, "ok" if v else "FAIL") for k, v in self.checks)
        return "VerificationReport(%s, %s: %s; %s)" % (
            self.lam,
            self.mode,
            self.status,
            flat,
        )


def _step_expansion_for(lam: Partition, mode: str) -> Expansion:
    flavor, side = _mode_parts(mode)
    if flavor == "mac":
        return expand_Q_step(lam) if side == "g" else expand_P_step(lam)
    return jack_step(lam, side)


def verify_expansion(lam, mode: str = "mac-g") -> VerificationReport:
    """Certify the expansions of lam in the given mode against the oracle.

    Three checks: the two full strategies agree term for term; the full
    product expansion reassembles to the oracle target exactly; the
    one-step peel, with oracle values for its tail, does too.
    """
    lam = _as_partition(lam)
    ctx = mode_ctx(mode)
    flavor, side = _mode_parts(mode)
    orc = oracle(mode)
    timings: Dict[str, float] = {}
    checks: List[Tuple[str, bool]] = []

    t0 = time.perf_counter()
    rec = expand_full(lam, mode)
    direct = expand_full(lam, mode, strategy="direct")
    timings["expand"] = time.perf_counter() - t0
    checks.append(("strategy-agree", rec.terms == direct.terms))

    t0 = time.perf_counter()
    got = products_to_symfun(rec, basis="p")
    target = orc.Q_in_p(lam) if side == "g" else orc.P_in_p(lam)
    residual = (got - target).convert("m")
    timings["reassemble"] = time.perf_counter() - t0
    checks.append(("reassembly", residual.is_zero()))

    t0 = time.perf_counter()
    step_ok = True
    if lam.length:
        step = _step_expansion_for(lam, mode)
        acc = SymFun.zero(ctx)
        row_fn = g_in_p if side == "g" else e_in_p
        tail_fn = orc.Q_in_p if side == "g" else orc.P_in_p
        for tm in step.terms:
            tail, row = tm.index
            acc = acc + (row_fn(ctx, row) * tail_fn(tail)).scale(tm.coeff)
        step_ok = (acc - target).is_zero()
    timings["one-step"] = time.perf_counter() - t0
    checks.append(("step-reassembly", step_ok))

    status = "pass" if all(ok for _, ok in checks) else "fail"
    return VerificationReport(
        lam, mode, status, tuple(checks), rec.discarded, residual, timings
    )


# ---------------------------------------------------------------------------
# classical anchors


@lru_cache(maxsize=None)
def _schur_p(parts: Tuple[int, ...]) -> SymFun:
    """Schur s_lam over the qt context (constant coefficients), via the
    h-determinant det(h_{lam_i - i + j}), cofactor expansion down the
    first column with minors memoized by column set."""
    l = len(parts)
    if l == 0:
        return SymFun.one(QT)

    @lru_cache(maxsize=None)
    def minor(i: int, cols: Tuple[int, ...]) -> SymFun:
        if i == l:
            return SymFun.one(QT)
        total = SymFun.zero(QT)
        for pos, j in enumerate(cols):
            s = parts[i] - (i + 1) + (j + 1)
            if s < 0:
                continue
            term = minor(i + 1, cols[:pos] + cols[pos + 1 :])
            if s > 0:
                term = h_in_p(QT, s) * term
            if pos % 2:
                term = -term
            total = total + term
        return total

    return minor(0, tuple(range(l)))


def schur_m(lam) -> SymFun:
    """Classical Schur function in the m-basis (integer coefficients)."""
    return _schur_p(_as_partition(lam).parts).convert("m")


def _specialize_q_to_t(f: SymFun) -> SymFun:
    t = RatFun.var(QT, "t")
    return SymFun(
        QT, f.basis, {mu: substitute(c, {"q": t}, QT) for mu, c in f.coeffs.items()}
    )


def _swap_qt(f: SymFun) -> SymFun:
    q = RatFun.var(QT, "q")
    t = RatFun.var(QT, "t")
    return SymFun(
        QT,
        f.basis,
        {mu: substitute(c, {"q": t, "t": q}, QT) for mu, c in f.coeffs.items()},
    )


def degeneration_checks(lam) -> VerificationReport:
    """Anchor the qt oracle against classical specializations.

    (i) q := t collapses P_lam to the Schur function: integer coefficients,
    equal to the independent h-determinant.  (ii) The deformed omega sends
    Q_lam(q, t) to P_{lam'}(t, q).
    """
    lam = _as_partition(lam)
    orc = oracle("qt")
    timings: Dict[str, float] = {}
    checks: List[Tuple[str, bool]] = []
    residual: Optional[SymFun] = None

    t0 = time.perf_counter()
    spec = _specialize_q_to_t(orc.P(lam))
    integral = True
    for c in spec.coeffs.values():
        try:
            v = c.as_scalar()
        except DomainError:
            integral = False
            break
        if v.denominator != 1:
            integral = False
            break
    checks.append(("schur-integrality", integral))
    diff = spec - schur_m(lam)
    checks.append(("schur-jacobi-trudi", diff.is_zero()))
    if not diff.is_zero():
        residual = diff
    timings["schur"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    lhs = omega_qt(orc.Q_in_p(lam))
    rhs = _swap_qt(orc.P_in_p(lam.conjugate()))
    omega_ok = (lhs - rhs).is_zero()
    checks.append(("omega-duality", omega_ok))
    timings["omega"] = time.perf_counter() - t0

    status = "pass" if all(ok for _, ok in checks) else "fail"
    return VerificationReport(lam, "degeneration", status, tuple(checks), (), residual, timings)
