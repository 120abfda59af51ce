"""JSON, LaTeX, and plain-text emission for expansions and basis vectors.

JSON is the contract: every coefficient is carried losslessly as a pair of
integer polynomials (decimal-string coefficients, so arbitrary precision
survives any JSON parser), and documents round-trip exactly.  LaTeX and
text are best-effort renderings of the same data.

The integer pair for a rational function is canonical: multiply numerator
and denominator by the least common multiple of all coefficient
denominators, divide out the common integer content, keep the denominator's
leading sign positive.  Decoding rebuilds the same internal normal form, so
encode(decode(doc)) == doc byte for byte.
"""

import json
from math import gcd
from typing import Dict, List, Optional, Tuple

from .errors import DomainError
from ._rat import RAT
from .expand import DiscardRecord, Expansion, ExpTerm, MODES, _mode_parts, mode_ctx
from .partitions import Partition
from .ratfun import ALPHA, QT, FieldCtx, RatFun
from .symfunc import SymFun, mode_of

__all__ = [
    "FORMAT_VERSION",
    "EXPANSION_SCHEMA",
    "SYMFUN_SCHEMA",
    "canonical_bytes",
    "expansion_from_doc",
    "expansion_to_doc",
    "latex_expansion",
    "latex_ratfun",
    "ratfun_from_json",
    "ratfun_to_json",
    "symfun_from_doc",
    "symfun_to_doc",
    "text_expansion",
    "validate_doc",
]

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------


def _int_pair(f: RatFun) -> Tuple[Dict[tuple, int], Dict[tuple, int]]:
    """Integerized (num, den) dicts: integer coefficients, content 1 across
    the pair, denominator leading coefficient positive."""
    lcm = 1
    for d in (f.num, f.den):
        for c in d.values():
            cd = int(c.denominator)
            lcm = lcm // gcd(lcm, cd) * cd
    num = {e: int(c.numerator) * (lcm // int(c.denominator)) for e, c in f.num.items()}
    den = {e: int(c.numerator) * (lcm // int(c.denominator)) for e, c in f.den.items()}
    content = 0
    for d in (num, den):
        for c in d.values():
            content = gcd(content, abs(c))
    if content > 1:
        num = {e: c // content for e, c in num.items()}
        den = {e: c // content for e, c in den.items()}
    lead = max(den)
    if den[lead] < 0:
        num = {e: -c for e, c in num.items()}
        den = {e: -c for e, c in den.items()}
    return num, den


def _encode_side(d: Dict[tuple, int]) -> List[list]:
    out = []
    for e in sorted(d, reverse=True):
        out.append([str(d[e])] + list(e))
    return out


def ratfun_to_json(f: RatFun) -> dict:
    """Encode a coefficient as {"num": [[c, exps...], ...], "den": ...}.

    c is a decimal string; the exponent columns follow the context's
    variable order (e_q, e_t for Macdonald, e_alpha for Jack) and may be
    negative.
    """
    num, den = _int_pair(f)
    return {"num": _encode_side(num), "den": _encode_side(den)}


def _ctx_for_mode(mode: str) -> FieldCtx:
    if mode in ("qt", "alpha"):
        return QT if mode == "qt" else ALPHA
    return mode_ctx(mode)


def ratfun_from_json(doc: dict, ctx: FieldCtx) -> RatFun:
    """Decode a coefficient document over the given context."""
    nv = len(ctx.names)

    def side(rows):
        out = {}
        for row in rows:
            if len(row) != 1 + nv:
                raise DomainError(
                    "coefficient row %r has %d exponents, context %r needs %d"
                    % (row, len(row) - 1, ctx.names, nv)
                )
            e = tuple(int(x) for x in row[1:])
            if e in out:
                raise DomainError("duplicate monomial %r in coefficient" % (e,))
            c = RAT(str(row[0]))
            if c:
                out[e] = c
        return out

    num = side(doc["num"])
    den = side(doc["den"])
    if not den:
        raise DomainError("zero denominator in coefficient document")
    return RatFun(ctx, num, den)


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

# one [c, exponents...] row: decimal-string coefficient, integer exponents
_COEFF_ROWS = {
    "type": "array",
    "items": {
        "type": "array",
        "minItems": 2,
        "prefixItems": [{"type": "string", "pattern": "^-?[0-9]+$"}],
        "items": {"type": "integer"},
    },
}

_COEFF_SCHEMA = {
    "type": "object",
    "required": ["num", "den"],
    "additionalProperties": False,
    "properties": {"num": _COEFF_ROWS, "den": _COEFF_ROWS},
}

_PARTITION_SCHEMA = {
    "type": "array",
    "items": {"type": "integer", "minimum": 1},
}

EXPANSION_SCHEMA = {
    "type": "object",
    "required": ["format_version", "kind", "mode", "lambda", "strategy", "terms"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "kind": {"const": "expansion"},
        "mode": {"enum": list(MODES)},
        "lambda": _PARTITION_SCHEMA,
        "strategy": {"enum": ["recursive", "direct"]},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff"],
                "additionalProperties": False,
                "properties": {
                    "coeff": _COEFF_SCHEMA,
                    "g": _PARTITION_SCHEMA,
                    "e": _PARTITION_SCHEMA,
                },
                "oneOf": [{"required": ["g"]}, {"required": ["e"]}],
            },
        },
        "discarded": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["stage", "raw"],
                "additionalProperties": False,
                "properties": {
                    "stage": {"type": "string"},
                    "raw": {"type": "array", "items": {"type": "integer"}},
                    "coeff": {"anyOf": [_COEFF_SCHEMA, {"type": "null"}]},
                },
            },
        },
    },
}

SYMFUN_SCHEMA = {
    "type": "object",
    "required": ["format_version", "kind", "mode", "basis", "terms"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "kind": {"const": "symfun"},
        "mode": {"enum": ["qt", "alpha"]},
        "basis": {"enum": ["p", "m", "e", "h", "g"]},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "index"],
                "additionalProperties": False,
                "properties": {
                    "coeff": _COEFF_SCHEMA,
                    "index": _PARTITION_SCHEMA,
                },
            },
        },
    },
}


def validate_doc(doc: dict) -> str:
    """Schema-validate a document, returning its kind.

    Raises DomainError on any malformed input, including an unknown kind or
    a foreign format_version.
    """
    import jsonschema

    kind = doc.get("kind") if isinstance(doc, dict) else None
    schema = {"expansion": EXPANSION_SCHEMA, "symfun": SYMFUN_SCHEMA}.get(kind)
    if schema is None:
        raise DomainError("unrecognized document kind %r" % (kind,))
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise DomainError("schema violation: %s" % exc.message) from exc
    return kind


def _product_key(mode: str) -> str:
    return "g" if _mode_parts(mode)[1] == "g" else "e"


def expansion_to_doc(exp: Expansion) -> dict:
    """Encode a product expansion (the expand_full output shape)."""
    if exp.strategy not in ("recursive", "direct"):
        raise DomainError(
            "expansion carries no strategy tag; only expand_full output serializes"
        )
    key = _product_key(exp.mode)
    terms = []
    for term in exp.terms:
        if term.kind not in ("gProduct", "eProduct"):
            raise DomainError(
                "only product expansions serialize; term kind %r" % term.kind
            )
        terms.append({"coeff": ratfun_to_json(term.coeff), key: list(term.index)})
    discarded = []
    for rec in exp.discarded:
        row = {"stage": rec.stage, "raw": [int(x) for x in rec.raw]}
        if rec.coeff is not None:
            row["coeff"] = ratfun_to_json(rec.coeff)
        discarded.append(row)
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "expansion",
        "mode": exp.mode,
        "lambda": list(exp.source),
        "strategy": exp.strategy,
        "terms": terms,
    }
    if discarded:
        doc["discarded"] = discarded
    return doc


def expansion_from_doc(doc: dict) -> Expansion:
    """Decode an expansion document back to the in-memory form."""
    validate_doc(doc)
    mode = doc["mode"]
    ctx = mode_ctx(mode)
    key = _product_key(mode)
    kind = "gProduct" if key == "g" else "eProduct"
    terms = []
    for row in doc["terms"]:
        if key not in row:
            raise DomainError(
                "term %r does not carry %r products as mode %r requires"
                % (row, key, mode)
            )
        coeff = ratfun_from_json(row["coeff"], ctx)
        terms.append(ExpTerm(coeff, kind, Partition(row[key])))
    discarded = []
    for row in doc.get("discarded", ()):
        coeff = row.get("coeff")
        discarded.append(
            DiscardRecord(
                row["stage"],
                tuple(row["raw"]),
                None if coeff is None else ratfun_from_json(coeff, ctx),
            )
        )
    return Expansion(
        Partition(doc["lambda"]),
        mode,
        tuple(terms),
        tuple(discarded),
        strategy=doc["strategy"],
    )


def symfun_to_doc(f: SymFun) -> dict:
    """Encode a basis vector as a symfun document."""
    terms = [
        {"coeff": ratfun_to_json(c), "index": list(idx)}
        for idx, c in sorted(f.coeffs.items(), key=lambda kv: kv[0].parts)
    ]
    return {
        "format_version": FORMAT_VERSION,
        "kind": "symfun",
        "mode": mode_of(f.ctx),
        "basis": f.basis,
        "terms": terms,
    }


def symfun_from_doc(doc: dict) -> SymFun:
    validate_doc(doc)
    ctx = QT if doc["mode"] == "qt" else ALPHA
    coeffs = {}
    for row in doc["terms"]:
        idx = Partition(row["index"])
        if idx in coeffs:
            raise DomainError("duplicate index %r in symfun document" % (idx,))
        coeffs[idx] = ratfun_from_json(row["coeff"], ctx)
    return SymFun(ctx, doc["basis"], coeffs)


def canonical_bytes(doc: dict) -> bytes:
    """The one true byte serialization: sorted keys, no whitespace, newline
    terminated.  Cache keys and file payloads both hash this form."""
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode()


# ---------------------------------------------------------------------------
# LaTeX
# ---------------------------------------------------------------------------


def _poly_latex(d: Dict[tuple, int], names: Tuple[str, ...]) -> str:
    """Render an integer polynomial dict, constant term first."""

    def mono(e) -> str:
        out = []
        for nm, x in zip(names, e):
            nm = "\\alpha" if nm == "alpha" else nm
            if x == 0:
                continue
            if x == 1:
                out.append(nm)
            elif 0 <= x <= 9:
                out.append("%s^%d" % (nm, x))
            else:
                out.append("%s^{%d}" % (nm, x))
        return "".join(out)

    bits = []
    for e in sorted(d, key=lambda e: (sum(e), tuple(-x for x in e))):
        c = d[e]
        m = mono(e)
        mag = "" if abs(c) == 1 and m else str(abs(c))
        body = mag + m
        if not bits:
            bits.append(("-" if c < 0 else "") + body)
        else:
            bits.append(("-" if c < 0 else "+") + body)
    return "".join(bits) if bits else "0"


def _divisors(n: int) -> List[int]:
    n = abs(n)
    out = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(out + [n // d for d in out]))


def _atom_candidates(d: Dict[tuple, int], names: Tuple[str, ...]) -> List[Dict[tuple, int]]:
    if not d:
        return []
    nv = len(names)
    zero = (0,) * nv
    if names == ("alpha",):
        # linear rational-root candidates s*alpha + r with r | constant,
        # s | leading coefficient
        a0 = d.get((0,), 0)
        lead = d[max(d)]
        if a0 == 0 or abs(a0) > 10**6 or abs(lead) > 10**6:
            return []
        cands = []
        for s in _divisors(lead):
            for r in _divisors(a0):
                for sr in (r, -r):
                    cands.append({(1,): s, (0,): sr})
        return cands
    # binomials 1 +- prod names^e, bounded by the support box
    hi = [max((e[k] for e in d), default=0) for k in range(nv)]
    lo = [min((e[k] for e in d), default=0) for k in range(nv)]
    span = [max(h - min(l, 0), 0) for h, l in zip(hi, lo)]
    exps = []
    from itertools import product as iproduct

    for e in iproduct(*(range(s + 1) for s in span)):
        if any(e):
            exps.append(e)
    exps.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    cands = []
    for e in exps:
        cands.append({zero: 1, e: -1})
        cands.append({zero: 1, e: 1})
    return cands


def _try_divide(d: Dict[tuple, int], atom: Dict[tuple, int]) -> Optional[Dict[tuple, int]]:
    """Exact division of integer polynomial dicts, or None."""
    rem = dict(d)
    out: Dict[tuple, int] = {}
    lead = max(atom)
    lc = atom[lead]
    while rem:
        e = max(rem)
        c = rem[e]
        if c % lc:
            return None
        qe = tuple(a - b for a, b in zip(e, lead))
        if any(x < 0 for x in qe):
            return None
        qc = c // lc
        out[qe] = out.get(qe, 0) + qc
        for ae, ac in atom.items():
            ne = tuple(a + b for a, b in zip(qe, ae))
            nc = rem.get(ne, 0) - qc * ac
            if nc:
                rem[ne] = nc
            else:
                rem.pop(ne, None)
    return out


def _factor_side(d: Dict[tuple, int], names: Tuple[str, ...]):
    """Best-effort split into (sign, const, mono_exps, atoms, leftover)."""
    nv = len(names)
    if not d:
        return 1, 0, (0,) * nv, [], {}
    mono = tuple(min(e[k] for e in d) for k in range(nv))
    d = {tuple(a - b for a, b in zip(e, mono)): c for e, c in d.items()}
    atoms: List[Dict[tuple, int]] = []
    changed = True
    while changed and len(d) > 1:
        changed = False
        for atom in _atom_candidates(d, names):
            if atom == d:
                continue
            q = _try_divide(d, atom)
            if q is not None:
                atoms.append(atom)
                d = q
                changed = True
                break
    const = 1
    if len(d) == 1:
        e, c = next(iter(d.items()))
        const = c
        mono = tuple(a + b for a, b in zip(mono, e))
        d = {}
    sign = 1
    if const < 0:
        sign, const = -1, -const
    return sign, const, mono, atoms, d


def _mono_latex(e: tuple, names: Tuple[str, ...]) -> str:
    return _poly_latex({e: 1}, names) if any(e) else ""


def _side_latex(d: Dict[tuple, int], names: Tuple[str, ...]):
    """Render one side; returns (sign, body string), body None on Laurent
    exponents the pretty printer does not attempt."""
    sign, const, mono, atoms, rest = _factor_side(d, names)
    if any(x < 0 for x in mono):
        return 1, None
    pieces = []
    if const != 1 or (not any(mono) and not atoms and not rest):
        pieces.append(str(const))
    m = _mono_latex(mono, names)
    if m:
        pieces.append(m)
    for atom in atoms:
        pieces.append("(%s)" % _poly_latex(atom, names))
    if rest:
        pieces.append("(%s)" % _poly_latex(rest, names))
    if len(pieces) == 1 and pieces[0].startswith("(") and pieces[0].endswith(")"):
        pieces[0] = pieces[0][1:-1]
    return sign, "".join(pieces)


def latex_ratfun(f: RatFun) -> str:
    """Best-effort LaTeX for a coefficient: factored binomial atoms over a
    factored denominator, sign out front."""
    num, den = _int_pair(f)
    if not num:
        return "0"
    ns, nbody = _side_latex(num, f.ctx.names)
    ds, dbody = _side_latex(den, f.ctx.names)
    if nbody is None or dbody is None:
        # Laurent exponents: fall back to the plain string form
        return str(f)
    sign = "-" if ns * ds < 0 else ""
    if dbody == "1":
        if nbody.startswith("(") and nbody.endswith(")"):
            nbody = nbody[1:-1]
        return sign + nbody
    return "%s\\frac{%s}{%s}" % (sign, nbody, dbody)


def _group_subscripts(index) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for k in index:
        if out and out[-1][0] == k:
            out[-1] = (k, out[-1][1] + 1)
        else:
            out.append((k, 1))
    return out


def _latex_product(key: str, index) -> str:
    if not len(index):
        return "1"
    bits = []
    for k, mult in _group_subscripts(index):
        sub = str(k) if k < 10 else "{%d}" % k
        pw = "" if mult == 1 else ("^%d" % mult if mult < 10 else "^{%d}" % mult)
        bits.append("%s_%s%s" % (key, sub, pw))
    return "".join(bits)


def latex_expansion(exp: Expansion) -> str:
    """Render a product expansion, e.g. g_1^2-\\frac{(1+q)(1-t)}{1-qt}\\,g_2."""
    key = _product_key(exp.mode)
    bits = []
    for term in exp.terms:
        prod = _latex_product(key, term.index)
        c = latex_ratfun(term.coeff)
        if c == "1":
            body = prod
        elif c == "-1":
            body = "-" + prod
        elif prod == "1":
            body = c
        else:
            body = "%s\\,%s" % (c, prod)
        if bits and not body.startswith("-"):
            bits.append("+")
        bits.append(body)
    return "".join(bits) if bits else "0"


# ---------------------------------------------------------------------------
# plain text
# ---------------------------------------------------------------------------


def _text_product(key: str, index) -> str:
    if not len(index):
        return "1"
    bits = []
    for k, mult in _group_subscripts(index):
        bits.append("%s[%d]%s" % (key, k, "" if mult == 1 else "^%d" % mult))
    return "*".join(bits)


def text_expansion(exp: Expansion) -> str:
    """Render a product expansion as one readable line, e.g. g[2]."""
    key = _product_key(exp.mode)
    bits = []
    for term in exp.terms:
        prod = _text_product(key, term.index)
        c = term.coeff
        if c.is_one():
            sign, body = "+", prod
        elif (-c).is_one():
            sign, body = "-", prod
        else:
            s = str(c)
            sign = "+"
            if s.startswith("-") and "/" not in s and " " not in s[1:]:
                sign, s = "-", s[1:]
            if not (s.startswith("(") and s.endswith(")")) and (" " in s or "/" in s):
                s = "(%s)" % s
            body = "%s * %s" % (s, prod) if prod != "1" else s
        if not bits:
            bits.append(body if sign == "+" else "-" + body)
        else:
            bits.append(" %s %s" % ("+" if sign == "+" else "-", body))
    return "".join(bits) if bits else "0"
