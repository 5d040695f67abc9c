"""Vectorised double-double arithmetic.

The per-point WAFOM terms are O(1) and cancel down to values many orders of
magnitude smaller, so the products and the reduction are carried in
double-double (about 106 bits).  All routines are error-free transformations
(Knuth two-sum, Dekker split) on numpy arrays.
"""

from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def mul(ahi, alo, bhi, blo):
    p, e = two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return quick_two_sum(p, e)


def add(ahi, alo, bhi, blo):
    s, e = two_sum(ahi, bhi)
    t, f = two_sum(alo, blo)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def from_fraction(x: Fraction) -> tuple[float, float]:
    hi = float(x)
    return hi, float(x - Fraction(hi))


def pairwise_sum(hi: np.ndarray, lo: np.ndarray) -> tuple[float, float]:
    """Sum a double-double vector with a fixed halving tree.

    The tree shape depends only on the length, so the result is bit-stable
    however the inputs were produced.
    """
    hi = np.asarray(hi, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    if hi.size == 0:
        return 0.0, 0.0
    while hi.size > 1:
        if hi.size % 2:
            hi = np.append(hi, 0.0)
            lo = np.append(lo, 0.0)
        half = hi.size // 2
        hi, lo = add(hi[:half], lo[:half], hi[half:], lo[half:])
    return float(hi[0]), float(lo[0])
