#!/usr/bin/env python3
"""Benchmark the compiled term-arithmetic kernel against the pure fallback.

Two sections.  The micro section times the raw exponent-dict operations
both backends export, on identical random inputs.  The end-to-end section
launches fresh interpreters (PIERI_FORGE_PURE=1 forces the fallback) and
times a realistic workload: every partition of weight <= W expanded into
g-products and the matching orthogonal-basis table built from scratch.

Usage:
    python3 benchmarks/bench_kernel.py [--repeats N] [--weight W] [--micro-only]
"""

import argparse
import os
import random
import statistics
import subprocess
import sys
import time

from pieri_forge import _termops_py as pure
from pieri_forge._rat import RAT

try:
    from pieri_forge import _termops_cy as compiled
except ImportError:
    compiled = None

E2E_SNIPPET = """
from pieri_forge.expand import expand_full, products_to_symfun
from pieri_forge.oracle import oracle
from pieri_forge.partitions import partitions_upto
o = oracle("qt")
for lam in partitions_upto(%d):
    products_to_symfun(expand_full(lam, "mac-g"))
    o.Q_in_p(lam)
"""


def random_poly(rng, nvars, terms):
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(-6, 8) for _ in range(nvars))
        c = RAT(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
        if c:
            out[e] = c
    return {e: c for e, c in out.items() if c}


def time_op(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def micro(repeats):
    rng = random.Random(11)
    A = random_poly(rng, 2, 160)
    B = random_poly(rng, 2, 160)
    c = RAT(355, 113)
    e = (1, -2)
    ops = [
        ("mul 160x160", lambda m: m.mul(A, B)),
        ("addp", lambda m: m.addp(A, B)),
        ("subp", lambda m: m.subp(A, B)),
        ("scale", lambda m: m.scale(A, c)),
        ("shift_scale", lambda m: m.shift_scale(A, e, c)),
        ("submul_inplace", lambda m: m.submul_inplace(dict(A), B, e, c)),
        ("lead", lambda m: m.lead(A)),
    ]
    print("%-16s %12s %12s %8s" % ("op", "pure (us)", "compiled (us)", "ratio"))
    for name, op in ops:
        tp = time_op(lambda: op(pure), repeats)
        if compiled is None:
            print("%-16s %12.1f %12s %8s" % (name, tp * 1e6, "-", "-"))
            continue
        tc = time_op(lambda: op(compiled), repeats)
        print(
            "%-16s %12.1f %12.1f %7.2fx"
            % (name, tp * 1e6, tc * 1e6, tp / tc if tc else float("inf"))
        )


def end_to_end(weight):
    rows = []
    for label, force in (("compiled", None), ("pure", "1")):
        if label == "compiled" and compiled is None:
            print("compiled kernel not built; skipping its end-to-end run")
            continue
        env = dict(os.environ)
        env.pop("PIERI_FORGE_PURE", None)
        if force:
            env["PIERI_FORGE_PURE"] = force
        t0 = time.perf_counter()
        subprocess.run(
            [sys.executable, "-c", E2E_SNIPPET % weight],
            env=env,
            check=True,
        )
        rows.append((label, time.perf_counter() - t0))
    for label, dt in rows:
        print("end-to-end weight<=%d  %-8s %6.2fs" % (weight, label, dt))
    if len(rows) == 2:
        print("speedup %.2fx" % (rows[1][1] / rows[0][1]))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--weight", type=int, default=6)
    ap.add_argument("--micro-only", action="store_true")
    args = ap.parse_args(argv)
    print("backends: pure=yes compiled=%s" % ("yes" if compiled else "no"))
    micro(args.repeats)
    if not args.micro_only:
        end_to_end(args.weight)
    return 0


if __name__ == "__main__":
    sys.exit(main())
