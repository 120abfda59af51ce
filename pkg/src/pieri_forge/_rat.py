"""Rational coefficient type used throughout the package.

gmpy2.mpq when available (much faster at desk scale), fractions.Fraction
otherwise.  Exactly one of the two is active per process; they are never
mixed inside a single polynomial.
"""

import math

try:
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpq as RAT
    from gmpy2 import mpz as _mpz

    BACKEND = "gmpy2"

    def int_gcd(a, b):
        return _gcd(_mpz(a), _mpz(b))

except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as RAT

    BACKEND = "fractions"

    def int_gcd(a, b):
        return math.gcd(int(a), int(b))


ZERO = RAT(0)
ONE = RAT(1)


def rat(a, b=1):
    """Build a coefficient from ints or a 'p' / 'p/q' string."""
    return RAT(a, b) if b != 1 else RAT(a)


def int_lcm(a, b):
    if not a or not b:
        return 0
    return abs(a * b) // int_gcd(a, b)


def rat_str(c) -> str:
    """Canonical 'p' or 'p/q' rendering, arbitrary precision."""
    n, d = c.numerator, c.denominator
    return str(n) if d == 1 else "%s/%s" % (n, d)
