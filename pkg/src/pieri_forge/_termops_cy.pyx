# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-arithmetic kernel, twin of _termops_py.

Same dict-of-exponent-tuples representation, same function contract.
Coefficients stay opaque Python objects (gmpy2.mpq or Fraction), so all we
buy here is tight loops and fast tuple construction.
"""

from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF


cdef inline tuple tadd(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple out = PyTuple_New(n)
    cdef object s
    for i in range(n):
        s = (<object>PyTuple_GET_ITEM(a, i)) + (<object>PyTuple_GET_ITEM(b, i))
        Py_INCREF(s)
        PyTuple_SET_ITEM(out, i, s)
    return out


def mul(dict A, dict B):
    """Product of two term dicts."""
    if not A or not B:
        return {}
    if len(A) > len(B):
        A, B = B, A
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef object ca, cb, prev, s
    for ea, ca in A.items():
        for eb, cb in B.items():
            e = tadd(ea, eb)
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


def addp(dict A, dict B):
    """Sum of two term dicts."""
    cdef dict out = dict(A)
    cdef tuple e
    cdef object c, prev, s
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


def subp(dict A, dict B):
    """Difference A - B of two term dicts."""
    cdef dict out = dict(A)
    cdef tuple e
    cdef object c, prev, s
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


def neg(dict A):
    cdef dict out = {}
    cdef tuple e
    cdef object c
    for e, c in A.items():
        out[e] = -c
    return out


def scale(dict A, c):
    """c * A for nonzero scalar c."""
    cdef dict out = {}
    cdef tuple e
    cdef object ca
    for e, ca in A.items():
        out[e] = c * ca
    return out


def shift_scale(dict A, tuple e, c):
    """c * x^e * A for nonzero scalar c and exponent vector e."""
    cdef dict out = {}
    cdef tuple ea
    cdef object ca
    for ea, ca in A.items():
        out[tadd(ea, e)] = c * ca
    return out


def submul_inplace(dict R, dict B, tuple e, c):
    """R -= c * x^e * B, mutating R."""
    cdef tuple eb, key
    cdef object cb, prev, s
    for eb, cb in B.items():
        key = tadd(eb, e)
        prev = R.get(key)
        if prev is None:
            R[key] = -c * cb
        else:
            s = prev - c * cb
            if s:
                R[key] = s
            else:
                del R[key]


def lead(dict A):
    """(exponent, coefficient) of the deglex-largest term.  A must be nonempty."""
    cdef tuple best = None
    cdef object best_key = None
    cdef object k
    cdef tuple e
    cdef Py_ssize_t i, n
    cdef object tot
    for e in A:
        n = PyTuple_GET_SIZE(e)
        tot = 0
        for i in range(n):
            tot = tot + <object>PyTuple_GET_ITEM(e, i)
        k = (tot, e)
        if best_key is None or k > best_key:
            best_key = k
            best = e
    return best, A[best]
