"""Pure-Python term-arithmetic kernel.

A (Laurent) polynomial is a plain dict mapping exponent tuples (one slot per
field variable, ints of either sign) to nonzero rational coefficients.  Both
kernels, this one and the compiled twin in _termops_cy, implement exactly the
same contract on exactly the same representation; pieri_forge.kernel picks one
at import time.

Nothing here validates inputs: callers keep dicts zero-free and tuples of
uniform arity.
"""

from operator import add as _add


def mul(A, B):
    """Product of two term dicts."""
    if not A or not B:
        return {}
    if len(A) > len(B):  # fewer outer iterations on the smaller factor
        A, B = B, A
    out = {}
    items = B.items()
    for ea, ca in A.items():
        for eb, cb in items:
            e = tuple(map(_add, ea, eb))
            prev = out.get(e)
            if prev is None:
                out[e] = ca * cb
            else:
                s = prev + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
    return out


def addp(A, B):
    """Sum of two term dicts."""
    out = dict(A)
    for e, c in B.items():
        prev = out.get(e)
        if prev is None:
            out[e] = c
        else:
            s = prev + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def subp(A, B):
    """Difference A - B of two term dicts."""
    out = dict(A)
    for e, c in B.items():
        prev = out.get(e)
        if prev is None:
            out[e] = -c
        else:
            s = prev - c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def neg(A):
    return {e: -c for e, c in A.items()}


def scale(A, c):
    """c * A for nonzero scalar c."""
    return {e: c * ca for e, ca in A.items()}


def shift_scale(A, e, c):
    """c * x^e * A for nonzero scalar c and exponent vector e."""
    return {tuple(map(_add, ea, e)): c * ca for ea, ca in A.items()}


def submul_inplace(R, B, e, c):
    """R -= c * x^e * B, mutating R."""
    for eb, cb in B.items():
        key = tuple(map(_add, eb, e))
        prev = R.get(key)
        if prev is None:
            R[key] = -c * cb
        else:
            s = prev - c * cb
            if s:
                R[key] = s
            else:
                del R[key]


def lead(A):
    """(exponent, coefficient) of the deglex-largest term.  A must be nonempty."""
    best = None
    best_key = None
    for e in A:
        k = (sum(e), e)
        if best_key is None or k > best_key:
            best_key = k
            best = e
    return best, A[best]
