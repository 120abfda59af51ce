"""JSON round-trips, schema validation, canonical bytes, LaTeX and text."""

import json
from fractions import Fraction

import pytest

from pieri_forge.errors import DomainError
from pieri_forge.expand import expand_full
from pieri_forge.partitions import Partition
from pieri_forge.ratfun import ALPHA, QT, RatFun
from pieri_forge.serialize import (
    FORMAT_VERSION,
    canonical_bytes,
    expansion_from_doc,
    expansion_to_doc,
    latex_expansion,
    latex_ratfun,
    ratfun_from_json,
    ratfun_to_json,
    symfun_from_doc,
    symfun_to_doc,
    text_expansion,
    validate_doc,
)
from pieri_forge.symfunc import SymFun, e_in_p

q = RatFun.var(QT, "q")
t = RatFun.var(QT, "t")
one = RatFun.one(QT)
alpha = RatFun.var(ALPHA, "alpha")


# ---------------------------------------------------------------------------
# coefficient codec


def test_ratfun_json_shape():
    f = -((one + q) * (one - t)) / (one - q * t)
    doc = ratfun_to_json(f)
    assert set(doc) == {"num", "den"}
    # integerized: decimal-string coefficients, integer exponent columns
    for row in doc["num"] + doc["den"]:
        assert len(row) == 3
        c, eq_, et = row
        assert isinstance(c, str) and int(c) is not None
        assert isinstance(eq_, int) and isinstance(et, int)
    assert ratfun_from_json(doc, QT) == f


def test_ratfun_json_alpha_rows_are_pairs():
    f = -(2 * RatFun.one(ALPHA)) / (alpha + 1)
    doc = ratfun_to_json(f)
    for row in doc["num"] + doc["den"]:
        assert len(row) == 2
    assert ratfun_from_json(doc, ALPHA) == f


def test_ratfun_json_integerization_is_content_free():
    # 3/6 must serialize with the common content divided out and a positive
    # leading denominator coefficient
    f = RatFun.const(QT, Fraction(3, 6))
    doc = ratfun_to_json(f)
    assert doc["num"] == [["1", 0, 0]]
    assert doc["den"] == [["2", 0, 0]]
    g = (q - t) / (2 * (t - q))  # negative leading den normalizes away
    doc = ratfun_to_json(g)
    lead = int(doc["den"][0][0])
    assert lead > 0
    assert ratfun_from_json(doc, QT) == g


def test_ratfun_json_laurent_and_bignum():
    f = (q**-3 + t) / (one - q * t**5)
    assert ratfun_from_json(ratfun_to_json(f), QT) == f
    big = RatFun.const(QT, 10**40) * q / (one - t)
    assert ratfun_from_json(ratfun_to_json(big), QT) == big


def test_ratfun_json_rejects_bad_docs():
    with pytest.raises(DomainError):
        ratfun_from_json({"num": [["1", 0, 0]], "den": []}, QT)  # zero den
    with pytest.raises(DomainError):
        ratfun_from_json({"num": [["1", 0]], "den": [["1", 0, 0]]}, QT)
    with pytest.raises(DomainError):
        ratfun_from_json(
            {"num": [["1", 0, 0], ["2", 0, 0]], "den": [["1", 0, 0]]}, QT
        )  # duplicate monomial rows


# ---------------------------------------------------------------------------
# expansion and symfun documents


def modes_expansions():
    yield expand_full(Partition((1, 1)), "mac-g")
    yield expand_full(Partition((2, 1)), "mac-e", "direct")
    yield expand_full(Partition((1, 1, 1)), "mac-g")
    yield expand_full(Partition((2, 1)), "jack-g")
    yield expand_full(Partition((2,)), "jack-e")


@pytest.mark.parametrize("exp", list(modes_expansions()), ids=lambda e: e.mode)
def test_expansion_round_trip(exp):
    doc = expansion_to_doc(exp)
    assert validate_doc(doc) == "expansion"
    back = expansion_from_doc(doc)
    assert back.source == exp.source
    assert back.mode == exp.mode
    assert back.strategy == exp.strategy
    assert back.terms == exp.terms
    assert back.discarded == exp.discarded


def test_expansion_doc_layout():
    doc = expansion_to_doc(expand_full(Partition((1, 1)), "mac-g"))
    assert doc["format_version"] == FORMAT_VERSION
    assert doc["lambda"] == [1, 1]
    assert doc["mode"] == "mac-g"
    assert doc["strategy"] == "recursive"
    keys = [("g" in tm and tuple(tm["g"])) or tuple(tm["e"]) for tm in doc["terms"]]
    assert keys == [(1, 1), (2,)]
    for tm in doc["terms"]:
        subs = tm.get("g", tm.get("e"))
        assert subs == sorted(subs, reverse=True)


def test_discarded_terms_serialized():
    doc = expansion_to_doc(expand_full(Partition((1, 1, 1)), "mac-g"))
    assert doc["discarded"], "the (1,2) drop must appear in the document"
    rec = doc["discarded"][0]
    assert rec["raw"] == [1, 2]
    assert "coeff" in rec


def test_step_expansions_refuse_to_serialize():
    from pieri_forge.expand import expand_Q_step

    with pytest.raises(DomainError):
        expansion_to_doc(expand_Q_step(Partition((1, 1))))


def test_symfun_round_trip():
    f = e_in_p(QT, 3) + SymFun.basis_element(QT, "p", Partition((2, 1))).scale(q)
    doc = symfun_to_doc(f)
    assert validate_doc(doc) == "symfun"
    assert symfun_from_doc(doc) == f
    g = SymFun.basis_element(ALPHA, "m", Partition((2,))).scale(alpha)
    assert symfun_from_doc(symfun_to_doc(g)) == g


def test_validate_doc_rejections():
    good = expansion_to_doc(expand_full(Partition((1, 1)), "mac-g"))
    bad = dict(good, format_version=99)
    with pytest.raises(DomainError):
        validate_doc(bad)
    bad = dict(good, mode="schur")
    with pytest.raises(DomainError):
        validate_doc(bad)
    bad = dict(good)
    bad["extra"] = 1
    with pytest.raises(DomainError):
        validate_doc(bad)
    with pytest.raises(DomainError):
        validate_doc({"kind": "mystery"})
    # coefficient strings must be decimal integers
    bad = json.loads(json.dumps(good))
    bad["terms"][0]["coeff"]["num"][0][0] = "1.5"
    with pytest.raises(DomainError):
        validate_doc(bad)


def test_canonical_bytes_are_stable_and_sorted():
    doc = expansion_to_doc(expand_full(Partition((2, 1)), "mac-g"))
    b1 = canonical_bytes(doc)
    b2 = canonical_bytes(json.loads(b1.decode()))
    assert b1 == b2
    assert b1.endswith(b"\n")
    assert b" " not in b1.split(b'"g"')[0].split(b"{")[1]  # compact separators


# ---------------------------------------------------------------------------
# renderers


def test_latex_ratfun_goldens():
    f = -((one + q) * (one - t)) / (one - q * t)
    assert latex_ratfun(f) == "-\\frac{(1+q)(1-t)}{1-qt}"
    assert latex_ratfun(one) == "1"
    assert latex_ratfun(-one) == "-1"
    assert latex_ratfun(q**2 * t) == "q^2t"
    j = -(2 * RatFun.one(ALPHA)) / (alpha + 1)
    assert latex_ratfun(j) == "-\\frac{2}{1+\\alpha}"


def test_latex_expansion_golden():
    s = latex_expansion(expand_full(Partition((1, 1)), "mac-g"))
    assert s == "g_1^2-\\frac{(1+q)(1-t)}{1-qt}\\,g_2"


def test_latex_expansion_e_mode():
    s = latex_expansion(expand_full(Partition((1, 1)), "mac-e"))
    assert s == "e_2"


def test_latex_falls_back_on_laurent():
    f = q**-1 + t
    out = latex_ratfun(f)
    assert out  # stringy fallback, never an exception


def test_text_expansion_golden():
    s = text_expansion(expand_full(Partition((1, 1)), "mac-g"))
    assert "g[1]^2" in s
    assert " - " in s
    assert "g[2]" in s
    s = text_expansion(expand_full(Partition((1, 1)), "mac-e"))
    assert s == "e[2]"
