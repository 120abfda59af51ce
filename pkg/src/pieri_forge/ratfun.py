"""Exact multivariate Laurent-polynomial and rational-function arithmetic.

Everything downstream (Pieri coefficients, determinants, scalar products,
the verification oracle) runs on the two value types defined here:

* LaurentPoly: sparse Laurent polynomial over a fixed variable tuple, with
  exact rational coefficients.
* RatFun: quotient of Laurent polynomials kept in a canonical reduced form,
  so that equality of values is literal equality of representations.

Canonical form of a RatFun num/den pair:

* den is a true polynomial (componentwise minimal exponent 0), monic with
  respect to the deglex leading term;
* num is a Laurent polynomial carrying any monomial shift;
* the polynomial parts of num and den are coprime.

Coefficients are gmpy2.mpq when available, fractions.Fraction otherwise;
exponents are arbitrary-size Python ints, so no overflow is possible.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from ._rat import ONE, RAT, ZERO, int_gcd, int_lcm, rat, rat_str
from .errors import ContextError, DomainError, SpecializationError
from .kernel import addp, lead, mul, neg, scale, shift_scale, submul_inplace, subp


class FieldCtx:
    """An ordered tuple of field-variable names, e.g. (q, t) or (alpha,)."""

    __slots__ = ("names", "nvars", "zero_exp", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ContextError("duplicate variable names: %r" % (names,))
        self.names = names
        self.nvars = len(names)
        self.zero_exp = (0,) * len(names)
        self._index = {n: i for i, n in enumerate(names)}

    def axis(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError("no variable %r in context %r" % (name, self.names))

    def extended(self, extra: Iterable[str]) -> "FieldCtx":
        return FieldCtx(self.names + tuple(extra))

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return "FieldCtx%r" % (self.names,)


QT = FieldCtx(("q", "t"))
ALPHA = FieldCtx(("alpha",))


def qt_with_symbols(n: int) -> FieldCtx:
    """Context (q, t, u1, ..., un) for generic-argument work."""
    return QT.extended("u%d" % (i + 1) for i in range(n))


# ---------------------------------------------------------------------------
# dict-level polynomial helpers (raw {exponent tuple: coefficient} form)
# ---------------------------------------------------------------------------


def _strip_shift(A: dict, n: int):
    """Factor A = x^shift * P with P a true polynomial (min exponents 0)."""
    mins = [None] * n
    for e in A:
        for i in range(n):
            v = e[i]
            if mins[i] is None or v < mins[i]:
                mins[i] = v
    if all(m == 0 for m in mins):
        return (0,) * n, A
    shift = tuple(mins)
    stripped = {tuple(e[i] - shift[i] for i in range(n)): c for e, c in A.items()}
    return shift, stripped


def _rat_content_strip(A: dict):
    """Factor A = content * P with P integer-coefficient, primitive, and
    positive deglex leading coefficient.  A must be nonzero."""
    g = 0
    l = 1
    for c in A.values():
        g = int_gcd(g, c.numerator)
        l = int_lcm(l, c.denominator)
    content = RAT(g, l)
    prim = {e: c / content for e, c in A.items()}
    if lead(prim)[1] < 0:
        content = -content
        prim = neg(prim)
    return content, prim


def _deg(A: dict, v: int) -> int:
    return max(e[v] for e in A)


def _coef_wrt(A: dict, v: int, d: int) -> dict:
    """Coefficient of x_v^d in A, as a dict with the v-slot zeroed."""
    out = {}
    for e, c in A.items():
        if e[v] == d:
            out[e[:v] + (0,) + e[v + 1 :]] = c
    return out


def _divexact(A: dict, B: dict, n: int):
    """Exact quotient of true polynomials, or None when not divisible."""
    if not A:
        return {}
    lb, cb = lead(B)
    Q = {}
    R = dict(A)
    while R:
        la, ca = lead(R)
        e = tuple(la[i] - lb[i] for i in range(n))
        if any(x < 0 for x in e):
            return None
        c = ca / cb
        Q[e] = c
        submul_inplace(R, B, e, c)
    return Q


def _divexact_laurent(A: dict, B: dict, n: int):
    """Exact quotient of Laurent polynomials, or None."""
    if not A:
        return {}
    sA, pA = _strip_shift(A, n)
    sB, pB = _strip_shift(B, n)
    Q = _divexact(pA, pB, n)
    if Q is None:
        return None
    net = tuple(sA[i] - sB[i] for i in range(n))
    if any(net):
        Q = shift_scale(Q, net, ONE)
    return Q


def _pseudo_rem(F: dict, G: dict, k: int, n: int):
    """Pseudo-remainder of F by G with respect to variable k."""
    dG = _deg(G, k)
    lcG = _coef_wrt(G, k, dG)
    R = F
    while R:
        dR = _deg(R, k)
        if dR < dG:
            break
        lcR = _coef_wrt(R, k, dR)
        shift = [0] * n
        shift[k] = dR - dG
        R = subp(mul(R, lcG), mul(shift_scale(lcR, tuple(shift), ONE), G))
    return R


def _content_wrt(A: dict, k: int, n: int):
    """(content, primitive part) of A viewed as a polynomial in x_k."""
    one = {(0,) * n: ONE}
    coeffs = {}
    for e, c in A.items():
        coeffs.setdefault(e[k], {})[e[:k] + (0,) + e[k + 1 :]] = c
    parts = list(coeffs.values())
    cont = parts[0]
    for p in parts[1:]:
        cont = _poly_gcd(cont, p, n)
        if cont == one:
            return one, A
    if cont == one:
        return one, A
    prim = _divexact(A, cont, n)
    return cont, prim


def _dense_mod(a, b):
    """Plain rational remainder a mod b, dense coefficient lists."""
    db = len(b) - 1
    if db == 0:
        return [ZERO]
    r = list(a)
    lc = b[db]
    while len(r) - 1 >= db and (len(r) > 1 or r[0]):
        dr = len(r) - 1
        c = r[dr] / lc
        if c:
            for j in range(db):
                r[dr - db + j] = r[dr - db + j] - c * b[j]
        r.pop()
        while len(r) > 1 and not r[-1]:
            r.pop()
    return r


def _gcd_univariate(A: dict, B: dict, v: int, n: int) -> dict:
    """Euclid over Q with per-round content stripping, for polynomials in
    the single variable x_v.  Returns the primitive integer gcd."""

    def to_dense(P):
        d = _deg(P, v)
        out = [ZERO] * (d + 1)
        for e, c in P.items():
            out[e[v]] = c
        return out

    def strip_int(vec):
        g = 0
        for c in vec:
            if c:
                g = int_gcd(g, c.numerator)
        if not g:
            return vec
        l = 1
        for c in vec:
            if c:
                l = int_lcm(l, c.denominator)
        f = RAT(g, l)
        return [c / f for c in vec]

    a, b = to_dense(A), to_dense(B)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1 or b[0]:
        r = _dense_mod(a, b)
        a, b = b, strip_int(r)
    a = strip_int(a)
    if a[-1] < 0:
        a = [-c for c in a]
    out = {}
    for i, c in enumerate(a):
        if c:
            e = [0] * n
            e[v] = i
            out[tuple(e)] = c
    return out


# small distinct evaluation points for the coprimality certificate; the
# sequence is fixed so results are bit-reproducible run to run
_CERT_POINTS = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _uni_image(A: dict, v: int, pts: dict, n: int):
    """Dense list of A with every variable but x_v evaluated per pts."""
    d = _deg(A, v)
    out = [ZERO] * (d + 1)
    powcache = {}
    for e, c in A.items():
        w = c
        for m in range(n):
            if m == v:
                continue
            p = e[m]
            if p:
                key = (m, p)
                pw = powcache.get(key)
                if pw is None:
                    pw = pts[m] ** p
                    powcache[key] = pw
                w = w * pw
        out[e[v]] = out[e[v]] + w
    while len(out) > 1 and not out[-1]:
        out.pop()
    if len(out) == 1 and not out[0]:
        return []
    return out


def _certify_coprime(A: dict, B: dict, common, n: int) -> bool:
    """Cheap proof that gcd(A, B) is constant, via univariate images.

    Any nonconstant gcd would involve only variables common to A and B.
    For each such variable, evaluate the others at fixed points; when both
    image degrees match the true degrees, the image of the gcd divides the
    gcd of the images, so a constant image gcd pins deg_v(gcd) = 0.  False
    positives are impossible; an unlucky point only forces the caller back
    to the slow path.
    """
    npts = len(_CERT_POINTS)
    for v in common:
        settled = False
        for trial in range(3):
            pts = {}
            k = 0
            for m in range(n):
                if m == v:
                    continue
                pts[m] = _CERT_POINTS[(k + 4 * trial) % npts] + trial
                k += 1
            ia = _uni_image(A, v, pts, n)
            ib = _uni_image(B, v, pts, n)
            if len(ia) - 1 != _deg(A, v) or len(ib) - 1 != _deg(B, v):
                continue
            a, b = ia, ib
            if len(a) < len(b):
                a, b = b, a
            while len(b) > 1 or b[0]:
                a, b = b, _dense_mod(a, b)
            if len(a) == 1:
                settled = True
                break
            return False
        if not settled:
            return False
    return True


def _eval_var(A: dict, w: int, c, n: int) -> dict:
    """Substitute x_w = c (exact rational) in a term dict."""
    out = {}
    pows = {}
    for e, coef in A.items():
        p = e[w]
        if p:
            pw = pows.get(p)
            if pw is None:
                pw = c**p
                pows[p] = pw
            coef = coef * pw
        ne = e[:w] + (0,) + e[w + 1 :]
        cur = out.get(ne)
        cur = coef if cur is None else cur + coef
        if cur:
            out[ne] = cur
        elif ne in out:
            del out[ne]
    return out


def _lc_wrt(A: dict, v: int, n: int) -> dict:
    """Leading coefficient of A as a polynomial in x_v (v-exponent zeroed)."""
    d = _deg(A, v)
    out = {}
    for e, c in A.items():
        if e[v] == d:
            out[e[:v] + (0,) + e[v + 1 :]] = c
    return out


def _interp_newton(pairs, w: int, n: int) -> dict:
    """Polynomial through the (point, dict-value) pairs, Newton form in x_w."""
    zero_exp = (0,) * n
    ew = [0] * n
    ew[w] = 1
    ew = tuple(ew)
    H = {}
    node = {zero_exp: ONE}
    cs = []
    for c, h in pairs:
        diff = subp(h, _eval_var(H, w, c, n)) if H else dict(h)
        if diff:
            denom = ONE
            for cj in cs:
                denom = denom * (c - cj)
            H = addp(H, mul(scale(diff, ONE / denom), node))
        lin = {ew: ONE}
        if c:
            lin[zero_exp] = -c
        node = mul(node, lin)
        cs.append(c)
    return H


def _gcd_interp(A: dict, B: dict, common, n: int):
    """Evaluation-interpolation gcd for >= 2 shared variables.

    Views both inputs as polynomials in a main variable v, interpolates the
    scaled gcd in a cheap second variable w from recursively computed
    images, and certifies the candidate by trial division.  Returns None
    when repeated unlucky evaluations exhaust the point budget; the caller
    then falls back to the pseudo-remainder path.
    """
    w = min(common, key=lambda x: min(_deg(A, x), _deg(B, x)))
    rest = [x for x in common if x != w]
    v = max(rest, key=lambda x: min(_deg(A, x), _deg(B, x)))
    cont_a, ppA = _content_wrt(A, v, n)
    cont_b, ppB = _content_wrt(B, v, n)
    cg = _poly_gcd(cont_a, cont_b, n)
    lcA = _lc_wrt(ppA, v, n)
    lcB = _lc_wrt(ppB, v, n)
    gamma = _poly_gcd(lcA, lcB, n)
    # reattach the monomial part of gcd(lcA, lcB) so the gcd's leading
    # coefficient divides gamma exactly and the image scaling stays
    # polynomial
    sla = _strip_shift(lcA, n)[0]
    slb = _strip_shift(lcB, n)[0]
    sl = tuple(min(x, y) for x, y in zip(sla, slb))
    if any(sl):
        gamma = mul(gamma, {sl: ONE})
    need = _deg(gamma, w) + min(_deg(ppA, w), _deg(ppB, w)) + 1
    pairs = []
    dmin = None
    c_int = 0
    budget = 2 * need + 12
    while len(pairs) < need and budget > 0:
        budget -= 1
        c = rat(c_int)
        c_int = -c_int + (0 if c_int > 0 else 1)  # 0, 1, -1, 2, -2, ...
        if not _eval_var(lcA, w, c, n) or not _eval_var(lcB, w, c, n):
            continue
        sa, ia = _strip_shift(_eval_var(ppA, w, c, n), n)
        sb, ib = _strip_shift(_eval_var(ppB, w, c, n), n)
        g_c = _poly_gcd(ia, ib, n)
        # an evaluation can turn part of the true gcd into a bare monomial,
        # which _poly_gcd discards; reattach the shared shift so the image
        # degree bookkeeping sees the whole thing
        s = tuple(min(x, y) for x, y in zip(sa, sb))
        if any(s):
            g_c = mul(g_c, {s: ONE})
        dv = _deg(g_c, v)
        if dv == 0:
            # primitive parts are coprime in the main variable
            return cg
        if dmin is None or dv < dmin:
            dmin = dv
            pairs = []
        elif dv > dmin:
            continue
        delta_c = _divexact(_eval_var(gamma, w, c, n), _lc_wrt(g_c, v, n), n)
        if delta_c is None:
            continue
        pairs.append((c, mul(g_c, delta_c)))
    if len(pairs) < need:
        return None
    H = _interp_newton(pairs, w, n)
    if not H:
        return None
    Hpp = _content_wrt(H, v, n)[1]
    G = _rat_content_strip(_strip_shift(Hpp, n)[1])[1]
    if _divexact(ppA, G, n) is None or _divexact(ppB, G, n) is None:
        return None
    out = _rat_content_strip(mul(cg, G))[1]
    if lead(out)[1] < 0:
        out = neg(out)
    return out


def _poly_gcd(A: dict, B: dict, n: int) -> dict:
    """Gcd of the polynomial parts of A and B, up to units.

    Monomial and rational content are discarded: the result is a primitive
    integer true polynomial with positive deglex leading coefficient (the
    constant 1 when the inputs are coprime).
    """
    one = {(0,) * n: ONE}
    if not A and not B:
        return one
    if not A:
        return _rat_content_strip(_strip_shift(B, n)[1])[1]
    if not B:
        return _rat_content_strip(_strip_shift(A, n)[1])[1]
    A = _rat_content_strip(_strip_shift(A, n)[1])[1]
    B = _rat_content_strip(_strip_shift(B, n)[1])[1]
    if len(A) == 1 or len(B) == 1:
        return one
    if A == B:
        return A
    used_A = [v for v in range(n) if any(e[v] for e in A)]
    used_B = [v for v in range(n) if any(e[v] for e in B)]
    common = set(used_A) & set(used_B)
    if not common:
        return one
    if len(used_A) == 1 and len(used_B) == 1:
        return _gcd_univariate(A, B, used_A[0], n)
    # most reduction calls are on coprime pairs; settle those without the
    # (potentially explosive) pseudo-remainder sequence
    if _certify_coprime(A, B, common, n):
        return one
    if len(common) >= 2:
        g = _gcd_interp(A, B, common, n)
        if g is not None:
            return g
    k = min(common, key=lambda v: max(_deg(A, v), _deg(B, v)))
    cont_a, prim_a = _content_wrt(A, k, n)
    cont_b, prim_b = _content_wrt(B, k, n)
    c = _poly_gcd(cont_a, cont_b, n)
    F, G = prim_a, prim_b
    if _deg(F, k) < _deg(G, k):
        F, G = G, F
    while True:
        R = _pseudo_rem(F, G, k, n)
        if not R:
            break
        if _deg(R, k) == 0:
            G = one
            break
        # pseudo-remainders pick up monomial factors from lc powers; the
        # content gcd cannot see those (monomial content is discarded by
        # contract), so strip the shift here or it pollutes the result
        R = _strip_shift(R, n)[1]
        F, G = G, _rat_content_strip(_content_wrt(R, k, n)[1])[1]
    if G is not one:
        G = _strip_shift(G, n)[1]
        G = _content_wrt(G, k, n)[1]
        G = _rat_content_strip(G)[1]
    out = mul(c, G)
    return _rat_content_strip(out)[1]


def _cancel(A: dict, g: dict, n: int) -> dict:
    """Exact Laurent division by a known divisor; loud if that breaks."""
    q = _divexact_laurent(A, g, n)
    if q is None:
        raise DomainError("internal: inexact gcd cancellation")
    return q


def _poly_lcm(A: dict, B: dict, n: int) -> dict:
    g = _poly_gcd(A, B, n)
    return mul(A, _cancel(B, g, n))


# ---------------------------------------------------------------------------
# public value types
# ---------------------------------------------------------------------------


def _as_terms(value, ctx: FieldCtx) -> dict:
    """Coerce int / RAT / LaurentPoly / raw dict to a clean term dict."""
    if isinstance(value, LaurentPoly):
        if value.ctx != ctx:
            raise ContextError("context mismatch: %r vs %r" % (value.ctx, ctx))
        return dict(value.terms)
    if isinstance(value, dict):
        out = {}
        for e, c in value.items():
            if len(e) != ctx.nvars:
                raise ContextError("exponent arity %d, context arity %d" % (len(e), ctx.nvars))
            c = c if isinstance(c, type(ONE)) else rat(c)
            if c:
                out[tuple(e)] = c
        return out
    c = value if isinstance(value, type(ONE)) else rat(value)
    return {ctx.zero_exp: c} if c else {}


class LaurentPoly:
    """Sparse Laurent polynomial over the variables of a FieldCtx."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: FieldCtx, terms=0):
        self.ctx = ctx
        self.terms = _as_terms(terms, ctx)
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def var(cls, ctx: FieldCtx, name: str, power: int = 1) -> "LaurentPoly":
        e = [0] * ctx.nvars
        e[ctx.axis(name)] = power
        return cls(ctx, {tuple(e): ONE})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Mapping[str, int], coeff=1) -> "LaurentPoly":
        e = [0] * ctx.nvars
        for name, p in exps.items():
            e[ctx.axis(name)] = p
        return cls(ctx, {tuple(e): rat(coeff)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {self.ctx.zero_exp: ONE}

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> dict:
        if isinstance(other, LaurentPoly):
            if other.ctx != self.ctx:
                raise ContextError("context mismatch")
            return other.terms
        return _as_terms(other, self.ctx)

    def __add__(self, other):
        return LaurentPoly(self.ctx, addp(self.terms, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return LaurentPoly(self.ctx, subp(self.terms, self._coerce(other)))

    def __rsub__(self, other):
        return LaurentPoly(self.ctx, subp(self._coerce(other), self.terms))

    def __mul__(self, other):
        return LaurentPoly(self.ctx, mul(self.terms, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return LaurentPoly(self.ctx, neg(self.terms))

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power of a LaurentPoly; use RatFun")
        out = {self.ctx.zero_exp: ONE}
        base = self.terms
        while k:
            if k & 1:
                out = mul(out, base)
            base = mul(base, base)
            k >>= 1
        return LaurentPoly(self.ctx, out)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, type(ONE))):
            return self.terms == _as_terms(other, self.ctx)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.names, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return "LaurentPoly(%s)" % (_poly_str(self.terms, self.ctx),)

    def __str__(self):
        return _poly_str(self.terms, self.ctx)


def _display_key(e):
    return (sum(e), tuple(-x for x in e))


def _poly_str(terms: dict, ctx: FieldCtx) -> str:
    if not terms:
        return "0"
    pieces = []
    for e in sorted(terms, key=_display_key):
        c = terms[e]
        factors = []
        for name, p in zip(ctx.names, e):
            if p == 1:
                factors.append(name)
            elif p:
                factors.append("%s^%d" % (name, p))
        mono = "*".join(factors)
        if not mono:
            body = rat_str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = "%s*%s" % (rat_str(abs(c)), mono)
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += " %s %s" % (sign, body)
    return out


_ONE_DEN = object()  # sentinel for "den already the constant 1"


class RatFun:
    """Rational function in canonical reduced form.  Immutable by convention."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: FieldCtx, num, den=1, *, _internal=False):
        self.ctx = ctx
        self._hash = None
        if _internal:
            self.num = num
            self.den = den
            return
        num = _as_terms(num, ctx)
        den = _as_terms(den, ctx)
        self.num, self.den = _normalize(num, den, ctx.nvars)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "RatFun":
        return cls(ctx, {}, {ctx.zero_exp: ONE}, _internal=True)

    @classmethod
    def one(cls, ctx: FieldCtx) -> "RatFun":
        return cls.const(ctx, ONE)

    @classmethod
    def const(cls, ctx: FieldCtx, c) -> "RatFun":
        c = c if isinstance(c, type(ONE)) else rat(c)
        num = {ctx.zero_exp: c} if c else {}
        return cls(ctx, num, {ctx.zero_exp: ONE}, _internal=True)

    @classmethod
    def var(cls, ctx: FieldCtx, name: str, power: int = 1) -> "RatFun":
        e = [0] * ctx.nvars
        e[ctx.axis(name)] = power
        return cls(ctx, {tuple(e): ONE}, {ctx.zero_exp: ONE}, _internal=True)

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Mapping[str, int], coeff=1) -> "RatFun":
        c = rat(coeff)
        if not c:
            return cls.zero(ctx)
        e = [0] * ctx.nvars
        for name, p in exps.items():
            e[ctx.axis(name)] = p
        return cls(ctx, {tuple(e): c}, {ctx.zero_exp: ONE}, _internal=True)

    # -- predicates / accessors -------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return (
            self.num == {self.ctx.zero_exp: ONE}
            and self.den == {self.ctx.zero_exp: ONE}
        )

    def is_polynomial(self) -> bool:
        return self.den == {self.ctx.zero_exp: ONE} and all(
            x >= 0 for e in self.num for x in e
        )

    def is_monomial(self) -> bool:
        return len(self.num) == 1 and self.den == {self.ctx.zero_exp: ONE}

    def as_scalar(self):
        """The coefficient when self is constant, else DomainError."""
        if self.is_zero():
            return ZERO
        if self.den == {self.ctx.zero_exp: ONE} and set(self.num) == {self.ctx.zero_exp}:
            return self.num[self.ctx.zero_exp]
        raise DomainError("not a constant: %s" % (self,))

    def __bool__(self):
        return bool(self.num)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFun):
            if other.ctx != self.ctx:
                raise ContextError(
                    "context mismatch: %r vs %r" % (self.ctx.names, other.ctx.names)
                )
            return other
        if isinstance(other, (int, type(ONE))):
            return RatFun.const(self.ctx, other)
        if isinstance(other, LaurentPoly):
            return RatFun(self.ctx, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = self.ctx.nvars
        if not self.num:
            return other
        if not other.num:
            return self
        A, P = self.num, self.den
        B, Q = other.num, other.den
        one = {self.ctx.zero_exp: ONE}
        if P == Q:
            if P == one:
                return RatFun(self.ctx, *_canon_reduced(addp(A, B), one, n), _internal=True)
            num, den = _normalize(addp(A, B), P, n)
            return RatFun(self.ctx, num, den, _internal=True)
        g = _poly_gcd(P, Q, n)
        if len(g) == 1 and not any(next(iter(g))):
            num = addp(mul(A, Q), mul(B, P))
            den = mul(P, Q)
            return RatFun(self.ctx, *_canon_reduced(num, den, n), _internal=True)
        P1 = _cancel(P, g, n)
        Q1 = _cancel(Q, g, n)
        num = addp(mul(A, Q1), mul(B, P1))
        if not num:
            return RatFun.zero(self.ctx)
        g2 = _poly_gcd(num, g, n)
        if len(g2) == 1 and not any(next(iter(g2))):
            den = mul(mul(P1, Q1), g)
        else:
            num = _cancel(num, g2, n)
            den = mul(mul(P1, Q1), _cancel(g, g2, n))
        return RatFun(self.ctx, *_canon_reduced(num, den, n), _internal=True)

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return RatFun(self.ctx, neg(self.num), self.den, _internal=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RatFun.zero(self.ctx)
        n = self.ctx.nvars
        A, P = self.num, self.den
        B, Q = other.num, other.den
        one = {self.ctx.zero_exp: ONE}
        if P == one and Q == one:
            return RatFun(self.ctx, *_canon_reduced(mul(A, B), one, n), _internal=True)
        g1 = _poly_gcd(A, Q, n)
        if not (len(g1) == 1 and not any(next(iter(g1)))):
            A = _cancel(A, g1, n)
            Q = _cancel(Q, g1, n)
        g2 = _poly_gcd(B, P, n)
        if not (len(g2) == 1 and not any(next(iter(g2)))):
            B = _cancel(B, g2, n)
            P = _cancel(P, g2, n)
        return RatFun(
            self.ctx, *_canon_reduced(mul(A, B), mul(P, Q), n), _internal=True
        )

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if not self.num:
            raise DomainError("division by zero rational function")
        n = self.ctx.nvars
        return RatFun(self.ctx, *_canon_reduced(self.den, self.num, n), _internal=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return RatFun.one(self.ctx)
        if k < 0:
            return self.inverse() ** (-k)
        n = self.ctx.nvars
        num, den = self.num, self.den
        out_n = {self.ctx.zero_exp: ONE}
        out_d = {self.ctx.zero_exp: ONE}
        while k:
            if k & 1:
                out_n = mul(out_n, num)
                out_d = mul(out_d, den)
            k >>= 1
            if k:
                num = mul(num, num)
                den = mul(den, den)
        # powers of a reduced fraction stay reduced; only units/shift to fix
        return RatFun(self.ctx, *_canon_reduced(out_n, out_d, n), _internal=True)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return (
                self.ctx == other.ctx
                and self.num == other.num
                and self.den == other.den
            )
        if isinstance(other, (int, type(ONE))):
            return (
                self.den == {self.ctx.zero_exp: ONE}
                and self.num == _as_terms(other, self.ctx)
            )
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (
                    self.ctx.names,
                    frozenset(self.num.items()),
                    frozenset(self.den.items()),
                )
            )
        return self._hash

    # -- display -----------------------------------------------------------

    def display_pair(self):
        """(num, den) with the display sign convention: the den's preferred
        coefficient (constant term when present, else deglex lead) positive."""
        num, den = self.num, self.den
        if den == {self.ctx.zero_exp: ONE}:
            return num, den
        anchor = den.get(self.ctx.zero_exp)
        if anchor is None:
            anchor = lead(den)[1]
        if anchor < 0:
            num, den = neg(num), neg(den)
        return num, den

    def __str__(self):
        num, den = self.display_pair()
        if den == {self.ctx.zero_exp: ONE}:
            return _poly_str(num, self.ctx)
        ns = _poly_str(num, self.ctx)
        ds = _poly_str(den, self.ctx)
        if len(num) > 1:
            ns = "(%s)" % ns
        if len(den) > 1:
            ds = "(%s)" % ds
        return "%s/%s" % (ns, ds)

    def __repr__(self):
        return "RatFun(%s)" % (self,)


def _normalize(num: dict, den: dict, n: int):
    """Full canonicalization: gcd reduction, shift extraction, monic den."""
    if not den:
        raise DomainError("zero denominator")
    if not num:
        return {}, {(0,) * n: ONE}
    g = _poly_gcd(num, den, n)
    if not (len(g) == 1 and not any(next(iter(g)))):
        num = _cancel(num, g, n)
        den = _cancel(den, g, n)
    return _canon_reduced(num, den, n)


def _canon_reduced(num: dict, den: dict, n: int):
    """Canonicalize a pair whose polynomial parts are already coprime."""
    if not num:
        return {}, {(0,) * n: ONE}
    sN, N = _strip_shift(num, n)
    sD, D = _strip_shift(den, n)
    lc = lead(D)[1]
    if lc != ONE:
        inv = ONE / lc
        N = scale(N, inv)
        D = scale(D, inv)
    net = tuple(sN[i] - sD[i] for i in range(n))
    if any(net):
        N = shift_scale(N, net, ONE)
    return N, D


# ---------------------------------------------------------------------------
# q-series and classical building blocks
# ---------------------------------------------------------------------------


def pochhammer(x: RatFun, base: RatFun, k: int) -> RatFun:
    """Finite product (x; base)_k = prod_{i=0}^{k-1} (1 - x * base^i)."""
    if k < 0:
        raise DomainError("negative Pochhammer length %d" % k)
    one = RatFun.one(x.ctx)
    out = one
    xb = x
    for _ in range(k):
        out = out * (one - xb)
        xb = xb * base
    return out


def raising_factorial(x: RatFun, k: int) -> RatFun:
    """Rising product (x)_k = x (x+1) ... (x+k-1)."""
    if k < 0:
        raise DomainError("negative rising-factorial length %d" % k)
    out = RatFun.one(x.ctx)
    for i in range(k):
        out = out * (x + i)
    return out


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def det(M, method: str = "bareiss") -> RatFun:
    """Determinant of a square RatFun matrix.

    'bareiss' clears denominators rowwise and runs fraction-free elimination
    over the Laurent-polynomial ring; 'cofactor' is the independent expansion
    used for cross-checks.  Both return the same canonical RatFun.
    """
    size = len(M)
    if size and len(M[0]) != size:
        raise DomainError("determinant of a non-square matrix")
    if size == 0:
        raise DomainError("determinant of an empty matrix")
    ctx = M[0][0].ctx
    for row in M:
        for ent in row:
            if ent.ctx != ctx:
                raise ContextError("mixed contexts in determinant")
    if method == "cofactor":
        return _det_cofactor(M)
    if method != "bareiss":
        raise DomainError("unknown determinant method %r" % (method,))
    n = ctx.nvars
    one = {ctx.zero_exp: ONE}
    rows = []
    clears = one
    for row in M:
        L = one
        for ent in row:
            if ent.den != one:
                g = _poly_gcd(L, ent.den, n)
                L = mul(L, _divexact(ent.den, g, n))
        cleared = []
        for ent in row:
            if ent.den == one:
                cleared.append(mul(ent.num, L) if L != one else dict(ent.num))
            else:
                cleared.append(mul(ent.num, _divexact(L, ent.den, n)))
        rows.append(cleared)
        clears = mul(clears, L)
    sign = 1
    prev = one
    for k in range(size - 1):
        if not rows[k][k]:
            pivot_row = next(
                (i for i in range(k + 1, size) if rows[i][k]), None
            )
            if pivot_row is None:
                return RatFun.zero(ctx)
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        piv = rows[k][k]
        for i in range(k + 1, size):
            rik = rows[i][k]
            for j in range(k + 1, size):
                tterm = subp(mul(rows[i][j], piv), mul(rik, rows[k][j]))
                if prev == one:
                    rows[i][j] = tterm
                else:
                    q = _divexact_laurent(tterm, prev, n)
                    if q is None:
                        raise DomainError("inexact division in fraction-free elimination")
                    rows[i][j] = q
            rows[i][k] = {}
        prev = piv
    result = rows[size - 1][size - 1]
    if sign < 0:
        result = neg(result)
    return RatFun(ctx, result, clears)


def _det_cofactor(M) -> RatFun:
    ctx = M[0][0].ctx
    size = len(M)
    if size == 1:
        return M[0][0]
    out = RatFun.zero(ctx)
    for j in range(size):
        ent = M[0][j]
        if ent.is_zero():
            continue
        minor = [[M[i][jj] for jj in range(size) if jj != j] for i in range(1, size)]
        term = ent * _det_cofactor(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def vandermonde(vs) -> RatFun:
    """prod_{i<j} (v_i - v_j) for a sequence of RatFun values."""
    vs = list(vs)
    if not vs:
        raise DomainError("empty Vandermonde product")
    out = RatFun.one(vs[0].ctx)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            out = out * (vs[i] - vs[j])
    return out


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def substitute(f: RatFun, bindings: Mapping[str, object], out_ctx: FieldCtx) -> RatFun:
    """Evaluate f with named variables replaced by values over out_ctx.

    Values may be RatFun over out_ctx, ints, or exact rationals.  Unbound
    variables must exist in out_ctx and map to themselves.  A vanishing
    denominator (or a negative power of zero) raises SpecializationError
    with the offending bindings attached.
    """
    ctx = f.ctx
    values: dict[int, RatFun] = {}
    for name, val in bindings.items():
        axis = ctx.axis(name)
        if isinstance(val, RatFun):
            if val.ctx != out_ctx:
                raise ContextError("binding for %r not over the output context" % name)
            values[axis] = val
        else:
            values[axis] = RatFun.const(out_ctx, val)
    for i, name in enumerate(ctx.names):
        if i not in values:
            values[i] = RatFun.var(out_ctx, name)

    def fail(msg):
        shown = {k: str(v) for k, v in bindings.items()}
        raise SpecializationError(msg, bindings=shown, value=str(f))

    num = f.num
    den = f.den
    # peel off exact-zero bindings termwise first
    zero_axes = [i for i, v in values.items() if v.is_zero()]
    for axis in zero_axes:
        kept_num = {}
        for e, c in num.items():
            if e[axis] < 0:
                fail("negative power of a variable bound to zero")
            if e[axis] == 0:
                kept_num[e] = c
        kept_den = {e: c for e, c in den.items() if e[axis] == 0}
        if any(e[axis] < 0 for e in den):
            fail("negative power of a variable bound to zero")
        num, den = kept_num, kept_den
        if not den:
            fail("denominator vanished under specialization")
    live = {i: v for i, v in values.items() if i not in zero_axes}

    if all(v.is_monomial() for v in live.values()):
        # pure monomial remap: one pass over the terms, no field arithmetic
        monos = {}
        for i, v in live.items():
            (exp, coeff) = next(iter(v.num.items()))
            monos[i] = (exp, coeff)

        def remap(terms):
            out = {}
            for e, c in terms.items():
                acc = c
                new_e = [0] * out_ctx.nvars
                for i, p in enumerate(e):
                    if not p:
                        continue
                    mexp, mc = monos[i]
                    if mc != ONE:
                        acc = acc * mc**p
                    for a, me in enumerate(mexp):
                        if me:
                            new_e[a] += me * p
                key = tuple(new_e)
                prev = out.get(key)
                if prev is None:
                    out[key] = acc
                else:
                    s = prev + acc
                    if s:
                        out[key] = s
                    else:
                        del out[key]
            return out

        new_num = remap(num)
        new_den = remap(den)
        if not new_den:
            fail("denominator vanished under specialization")
        return RatFun(out_ctx, new_num, new_den)

    # general path: evaluate term by term with a per-variable power cache
    pow_cache: dict[tuple[int, int], RatFun] = {}

    def power(axis, p):
        key = (axis, p)
        got = pow_cache.get(key)
        if got is None:
            base = live[axis]
            if base.is_zero() and p < 0:
                fail("negative power of a variable bound to zero")
            got = base**p
            pow_cache[key] = got
        return got

    def eval_terms(terms):
        acc = RatFun.zero(out_ctx)
        for e, c in terms.items():
            piece = RatFun.const(out_ctx, c)
            for i, p in enumerate(e):
                if p:
                    piece = piece * power(i, p)
            acc = acc + piece
        return acc

    num_val = eval_terms(num)
    den_val = eval_terms(den)
    if den_val.is_zero():
        fail("denominator vanished under specialization")
    return num_val / den_val
