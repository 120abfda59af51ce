"""Command line surface.

Commands: expand, pieri, verify, convert, ortho.  All stdout payloads are
deterministic: identical inputs give byte-identical bytes, whatever the
parallelism degree; timings and progress go to stderr.  Exit codes: 0 ok,
1 a verification failed, 2 usage or parse error, 3 a symbolic
specialization hit a vanishing denominator.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from typing import Optional

from .errors import DomainError, PieriForgeError, SpecializationError
from .expand import MODES, expand_full, products_to_symfun
from .inverse import orthogonality_check
from .oracle import degeneration_checks, verify_expansion
from .partitions import Partition, partitions_upto
from .pieri import pieri_expand
from .serialize import (
    FORMAT_VERSION,
    canonical_bytes,
    expansion_from_doc,
    expansion_to_doc,
    latex_expansion,
    latex_ratfun,
    symfun_from_doc,
    symfun_to_doc,
    text_expansion,
    validate_doc,
)

__all__ = ["main"]


def _parse_lambda(text: str) -> Partition:
    text = text.strip()
    if not text:
        return Partition(())
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise DomainError("cannot parse partition %r" % text)
    return Partition(parts)


def _cache_dir(arg: Optional[str]) -> Optional[str]:
    return arg if arg is not None else os.environ.get("PIERI_FORGE_CACHE")


def _cache_path(cache_dir: str, lam: Partition, mode: str, strategy: str) -> str:
    key = canonical_bytes(
        {
            "lambda": list(lam),
            "mode": mode,
            "strategy": strategy,
            "format_version": FORMAT_VERSION,
        }
    )
    return os.path.join(cache_dir, hashlib.sha256(key).hexdigest() + ".json")


def _cache_load(path: str) -> Optional[dict]:
    try:
        with open(path, "rb") as fh:
            doc = json.load(fh)
        validate_doc(doc)
        return doc
    except (OSError, ValueError, DomainError):
        return None


def _cache_store(path: str, doc: dict) -> None:
    d = os.path.dirname(path)
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(canonical_bytes(doc))
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass


def _emit_expansion(doc: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.buffer.write(canonical_bytes(doc))
        return
    exp = expansion_from_doc(doc)
    line = latex_expansion(exp) if fmt == "latex" else text_expansion(exp)
    sys.stdout.write(line + "\n")


def cmd_expand(args) -> int:
    lam = _parse_lambda(args.lam)
    doc = None
    cache = _cache_dir(args.cache_dir)
    path = _cache_path(cache, lam, args.mode, args.strategy) if cache else None
    if path:
        doc = _cache_load(path)
    if doc is None:
        exp = expand_full(lam, args.mode, args.strategy)
        doc = expansion_to_doc(exp)
        if path:
            _cache_store(path, doc)
    _emit_expansion(doc, args.format)
    return 0


def cmd_pieri(args) -> int:
    lam = _parse_lambda(args.lam)
    pe = pieri_expand(lam, args.row)
    if args.format == "json":
        from .serialize import ratfun_to_json

        terms = [
            {"coeff": ratfun_to_json(term.coeff), "index": list(term.index)}
            for term in pe.terms
        ]
        doc = {
            "format_version": FORMAT_VERSION,
            "kind": "pieri",
            "lambda": list(lam),
            "row": args.row,
            "terms": terms,
            "discarded": [
                {"raw": list(raw), "coeff": ratfun_to_json(c)}
                for raw, c in pe.discarded
            ],
        }
        sys.stdout.buffer.write(canonical_bytes(doc))
        return 0
    bits = []
    for term in pe.terms:
        idx = "Q[%s]" % ",".join(str(x) for x in term.index)
        if term.coeff.is_one():
            bits.append(idx)
        else:
            c = latex_ratfun(term.coeff) if args.format == "latex" else str(term.coeff)
            bits.append("%s * %s" % (c, idx))
    sys.stdout.write((" + ".join(bits) if bits else "0") + "\n")
    return 0


def _verify_case_doc(rep) -> dict:
    return {
        "lambda": list(rep.lam),
        "mode": rep.mode,
        "status": rep.status,
        "checks": {name: bool(ok) for name, ok in rep.checks},
        "discarded": len(rep.discarded),
    }


def cmd_verify(args) -> int:
    if args.ortho:
        if args.n is None or args.depth is None:
            raise DomainError("--ortho requires --n and --depth")
        return cmd_ortho(args)
    if args.max_weight is None:
        raise DomainError("verify requires --max-weight (or --ortho)")
    modes = [args.mode] if args.mode else list(MODES)
    lams = list(partitions_upto(args.max_weight, max_length=args.max_length))
    jobs = max(1, args.jobs)

    def run_case(pair):
        lam, mode = pair
        t0 = time.time()
        rep = verify_expansion(lam, mode)
        return rep, time.time() - t0

    cases = [(lam, mode) for lam in lams for mode in modes]
    results = []
    if jobs == 1:
        for case in cases:
            results.append(run_case(case))
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_case, cases))
    degs = [(degeneration_checks(lam), None) for lam in lams if lam.weight]
    n_fail = 0
    for rep, dt in results + degs:
        doc = _verify_case_doc(rep)
        sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
        if dt is not None:
            sys.stderr.write(
                "%s %s: %s in %.2fs\n" % (rep.lam, rep.mode, rep.status, dt)
            )
        if not rep.passed:
            n_fail += 1
            break
    summary = {"cases": len(results) + len(degs), "failures": n_fail}
    sys.stdout.write(json.dumps(summary, sort_keys=True, separators=(",", ":")) + "\n")
    return 1 if n_fail else 0


def cmd_ortho(args) -> int:
    if args.n is None or args.depth is None:
        raise DomainError("ortho requires --n and --depth")
    if args.n < 1 or args.depth < 0:
        raise DomainError("need n >= 1 and depth >= 0")
    from itertools import product as iproduct

    failures = []
    t0 = time.time()
    box = list(iproduct(range(args.depth + 1), repeat=args.n))
    for beta in box:
        for gamma in box:
            if not orthogonality_check(args.n, beta, gamma, args.depth):
                failures.append({"beta": list(beta), "gamma": list(gamma)})
    doc = {
        "n": args.n,
        "depth": args.depth,
        "pairs": len(box) * len(box),
        "failures": failures,
    }
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    sys.stderr.write("ortho n=%d depth=%d in %.2fs\n" % (args.n, args.depth, time.time() - t0))
    return 1 if failures else 0


def cmd_convert(args) -> int:
    try:
        if args.input == "-":
            doc = json.load(sys.stdin)
        else:
            with open(args.input, "rb") as fh:
                doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise DomainError("cannot read input document: %s" % exc)
    kind = validate_doc(doc)
    if kind == "expansion":
        f = products_to_symfun(expansion_from_doc(doc), "p")
    else:
        f = symfun_from_doc(doc)
    out = symfun_to_doc(f.convert(args.basis))
    if args.format == "json":
        sys.stdout.buffer.write(canonical_bytes(out))
        return 0
    bits = []
    for row in sorted(f.convert(args.basis).coeffs.items(), key=lambda kv: kv[0].parts):
        idx, c = row
        cs = latex_ratfun(c) if args.format == "latex" else str(c)
        bits.append("%s * %s[%s]" % (cs, args.basis, ",".join(str(x) for x in idx)))
    sys.stdout.write((" + ".join(bits) if bits else "0") + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pieri-forge",
        description="Exact Macdonald / Jack expansions into g- and e-products.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_fmt(sp):
        sp.add_argument(
            "--format", choices=("json", "latex", "text"), default="text"
        )

    sp = sub.add_parser("expand", help="expand one polynomial into products")
    sp.add_argument("--lambda", dest="lam", required=True, help="e.g. 2,1")
    sp.add_argument("--mode", choices=MODES, default="mac-g")
    sp.add_argument("--strategy", choices=("recursive", "direct"), default="recursive")
    sp.add_argument("--cache-dir", default=None)
    add_fmt(sp)
    sp.set_defaults(fn=cmd_expand)

    sp = sub.add_parser("pieri", help="single product expansion Q_lam * g_row")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--row", type=int, required=True)
    add_fmt(sp)
    sp.set_defaults(fn=cmd_pieri)

    sp = sub.add_parser("verify", help="certify expansions against the oracle")
    sp.add_argument("--max-weight", type=int, default=None)
    sp.add_argument("--max-length", type=int, default=None)
    sp.add_argument("--mode", choices=MODES, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--ortho", action="store_true")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("convert", help="re-express a stored document in a basis")
    sp.add_argument("input", help="expansion or symfun JSON file, - for stdin")
    sp.add_argument("--basis", choices=("p", "m", "e", "g"), required=True)
    sp.add_argument("--format", choices=("json", "latex", "text"), default="json")
    sp.set_defaults(fn=cmd_convert)

    sp = sub.add_parser("ortho", help="orthogonality certificate sweep")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.set_defaults(fn=cmd_ortho)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SpecializationError as exc:
        dump = {"error": "specialization", "message": str(exc), "context": exc.context}
        sys.stderr.write(json.dumps(dump, sort_keys=True, default=str) + "\n")
        return 3
    except DomainError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except PieriForgeError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
