"""Command-line surface, run in-process through main(argv).

Subprocess smoke (console script + compiled/pure parity) lives in
test_kernel; everything else is faster and easier to assert here.
"""

import json
import os

import pytest

from pieri_forge import cli
from pieri_forge.errors import SpecializationError
from pieri_forge.oracle import oracle
from pieri_forge.serialize import canonical_bytes, symfun_to_doc, validate_doc


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


# ---------------------------------------------------------------------------
# expand


def test_expand_latex_golden(capsys):
    rc, out, _ = run(capsys, "expand", "--lambda", "1,1", "--mode", "mac-g",
                     "--format", "latex")
    assert rc == 0
    assert out.strip() == "g_1^2-\\frac{(1+q)(1-t)}{1-qt}\\,g_2"


def test_expand_text_goldens(capsys):
    rc, out, _ = run(capsys, "expand", "--lambda", "1,1", "--mode", "mac-e",
                     "--format", "text")
    assert rc == 0 and out.strip() == "e[2]"
    rc, out, _ = run(capsys, "expand", "--lambda", "2", "--mode", "mac-g")
    assert rc == 0 and out.strip() == "g[2]"


def test_expand_json_is_canonical(capsys):
    rc, out, _ = run(capsys, "expand", "--lambda", "2,1", "--mode", "mac-g",
                     "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert validate_doc(doc) == "expansion"
    assert out.encode() == canonical_bytes(doc)
    rc2, out2, _ = run(capsys, "expand", "--lambda", "2,1", "--mode", "mac-g",
                       "--format", "json")
    assert out2 == out  # deterministic bytes


def test_expand_strategy_flag(capsys):
    rc, out, _ = run(capsys, "expand", "--lambda", "2,1", "--mode", "mac-g",
                     "--strategy", "direct", "--format", "json")
    assert rc == 0
    assert json.loads(out)["strategy"] == "direct"


def test_expand_empty_lambda(capsys):
    rc, out, _ = run(capsys, "expand", "--lambda", "", "--mode", "mac-g")
    assert rc == 0
    assert out.strip() == "1"


def test_expand_bad_lambda_exits_2(capsys):
    rc, _, err = run(capsys, "expand", "--lambda", "2,x", "--mode", "mac-g")
    assert rc == 2
    assert "error" in err


def test_expand_bad_mode_is_usage_error(capsys):
    with pytest.raises(SystemExit) as ei:
        cli.main(["expand", "--lambda", "1", "--mode", "schur"])
    assert ei.value.code == 2
    capsys.readouterr()


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as ei:
        cli.main(["expand", "--lambda", "1", "--turbo"])
    assert ei.value.code == 2
    capsys.readouterr()


def test_specialization_error_exits_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise SpecializationError("manufactured singularity", theta=(1,))

    monkeypatch.setattr(cli, "expand_full", boom)
    rc, _, err = run(capsys, "expand", "--lambda", "1", "--mode", "mac-g")
    assert rc == 3
    dump = json.loads(err)
    assert dump["error"] == "specialization"
    assert dump["context"]["theta"] == [1]


# ---------------------------------------------------------------------------
# caching


def test_cache_round_trip(capsys, tmp_path):
    args = ("expand", "--lambda", "3,1", "--mode", "mac-g", "--format", "json",
            "--cache-dir", str(tmp_path))
    rc, first, _ = run(capsys, *args)
    assert rc == 0
    entries = os.listdir(tmp_path)
    assert len(entries) == 1 and entries[0].endswith(".json")
    rc, second, _ = run(capsys, *args)
    assert second == first
    # corrupt entry is ignored, not trusted
    path = tmp_path / entries[0]
    path.write_text("{not json")
    rc, third, _ = run(capsys, *args)
    assert rc == 0 and third == first


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PIERI_FORGE_CACHE", str(tmp_path))
    rc, _, _ = run(capsys, "expand", "--lambda", "2,2", "--mode", "mac-e",
                   "--format", "json")
    assert rc == 0
    assert len(os.listdir(tmp_path)) == 1


def test_cache_key_separates_strategy(capsys, tmp_path):
    base = ("expand", "--lambda", "2,1", "--mode", "mac-g", "--format", "json",
            "--cache-dir", str(tmp_path))
    run(capsys, *base)
    run(capsys, *base[:-2], "--strategy", "direct", "--cache-dir", str(tmp_path))
    assert len(os.listdir(tmp_path)) == 2


# ---------------------------------------------------------------------------
# pieri


def test_pieri_json(capsys):
    rc, out, _ = run(capsys, "pieri", "--lambda", "1", "--row", "2",
                     "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["kind"] == "pieri"
    assert [tm["index"] for tm in doc["terms"]] == [[2, 1], [3]]
    assert doc["discarded"][0]["raw"] == [1, 2]


def test_pieri_text(capsys):
    rc, out, _ = run(capsys, "pieri", "--lambda", "1,1", "--row", "1",
                     "--format", "text")
    assert rc == 0
    assert out.startswith("Q[1,1,1] + ")
    assert "* Q[2,1]" in out


# ---------------------------------------------------------------------------
# verify


def test_verify_weight_zero(capsys):
    rc, out, err = run(capsys, "verify", "--max-weight", "0")
    assert rc == 0
    assert json.loads(out.strip().splitlines()[-1]) == {"cases": 0, "failures": 0}


def test_verify_small_sweep(capsys):
    rc, out, err = run(capsys, "verify", "--max-weight", "3", "--mode", "mac-g")
    assert rc == 0
    lines = [json.loads(x) for x in out.strip().splitlines()]
    summary = lines[-1]
    rows = lines[:-1]
    assert summary["failures"] == 0
    assert summary["cases"] == len(rows)
    assert {r["mode"] for r in rows} == {"mac-g", "degeneration"}
    assert all(r["status"] == "pass" for r in rows)
    # timings go to stderr, keeping stdout deterministic
    assert "s" in err or err == ""


def test_verify_jobs_do_not_change_bytes(capsys):
    rc1, out1, _ = run(capsys, "verify", "--max-weight", "3", "--mode", "jack-g")
    rc2, out2, _ = run(capsys, "verify", "--max-weight", "3", "--mode", "jack-g",
                       "--jobs", "3")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_verify_requires_range_or_ortho(capsys):
    rc, _, err = run(capsys, "verify")
    assert rc == 2


def test_verify_failure_exits_1(capsys, monkeypatch):
    real = cli.verify_expansion

    def sabotaged(lam, mode="mac-g"):
        rep = real(lam, mode)
        if lam.parts == (1, 1):
            object.__setattr__(rep, "status", "fail")
        return rep

    monkeypatch.setattr(cli, "verify_expansion", sabotaged)
    rc, out, _ = run(capsys, "verify", "--max-weight", "2", "--mode", "mac-g")
    assert rc == 1
    rows = [json.loads(x) for x in out.strip().splitlines()]
    assert rows[-1]["failures"] == 1
    assert any(r.get("status") == "fail" for r in rows)


def test_verify_ortho(capsys):
    rc, out, _ = run(capsys, "verify", "--ortho", "--n", "1", "--depth", "2")
    assert rc == 0
    doc = json.loads(out)
    assert doc == {"n": 1, "depth": 2, "pairs": doc["pairs"], "failures": []}
    assert doc["pairs"] >= 9


def test_ortho_subcommand(capsys):
    rc, out, _ = run(capsys, "ortho", "--n", "1", "--depth", "1")
    assert rc == 0
    assert json.loads(out)["failures"] == []


# ---------------------------------------------------------------------------
# convert


def expansion_file(tmp_path, capsys, *argv):
    rc, out, _ = run(capsys, *argv)
    assert rc == 0
    p = tmp_path / "exp.json"
    p.write_text(out)
    return p


def test_convert_matches_oracle_doc(capsys, tmp_path):
    p = expansion_file(tmp_path, capsys, "expand", "--lambda", "2,1", "--mode",
                       "mac-g", "--format", "json")
    rc, out, _ = run(capsys, "convert", str(p), "--basis", "m")
    assert rc == 0
    want = canonical_bytes(symfun_to_doc(oracle("qt").Q((2, 1))))
    assert out.encode() == want


def test_convert_e_products_to_p(capsys, tmp_path):
    p = expansion_file(tmp_path, capsys, "expand", "--lambda", "1,1", "--mode",
                       "mac-e", "--format", "json")
    rc, out, _ = run(capsys, "convert", str(p), "--basis", "p")
    assert rc == 0
    doc = json.loads(out)
    got = {tuple(tm["index"]): tm["coeff"] for tm in doc["terms"]}
    assert got[(1, 1)]["num"] == [["1", 0, 0]]
    assert got[(1, 1)]["den"] == [["2", 0, 0]]
    assert got[(2,)]["num"] == [["-1", 0, 0]]


def test_convert_symfun_identity(capsys, tmp_path):
    p = expansion_file(tmp_path, capsys, "expand", "--lambda", "1,1", "--mode",
                       "mac-e", "--format", "json")
    rc, out, _ = run(capsys, "convert", str(p), "--basis", "p")
    p2 = tmp_path / "sym.json"
    p2.write_text(out)
    rc, out2, _ = run(capsys, "convert", str(p2), "--basis", "p")
    assert rc == 0
    assert out2 == out


def test_convert_stdin(capsys, tmp_path, monkeypatch):
    import io

    p = expansion_file(tmp_path, capsys, "expand", "--lambda", "2", "--mode",
                       "mac-g", "--format", "json")
    monkeypatch.setattr("sys.stdin", io.StringIO(p.read_text()))
    rc, out, _ = run(capsys, "convert", "-", "--basis", "g")
    assert rc == 0
    doc = json.loads(out)
    assert doc["basis"] == "g"


def test_convert_malformed_exits_2(capsys, tmp_path):
    p = tmp_path / "junk.json"
    p.write_text('{"kind": "expansion"}')
    rc, _, err = run(capsys, "convert", str(p), "--basis", "m")
    assert rc == 2
    p.write_text("not json at all")
    rc, _, _ = run(capsys, "convert", str(p), "--basis", "m")
    assert rc == 2
