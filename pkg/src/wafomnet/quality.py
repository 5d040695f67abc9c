"""Quality measures for digital nets: exact t-value and WAFOM.

WAFOM is available through three independent routes:

* :func:`wafom` evaluates the per-point product formula digit by digit;
* :func:`wafom_fast` evaluates the same formula with 8-bit lookup tables;
* :func:`wafom_dual_oracle` sums ``q**-mu'(A)`` over the non-zero dual space
  by exhaustive enumeration (tiny nets only).

The product formula averages O(1) terms whose mean is often below 1e-10, so
both formula routes carry products and the reduction in double-double and
fall back to exact integer arithmetic when the double-double error bound is
not small against the result.
"""

from __future__ import annotations

import logging
import math
import time
from bisect import insort
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _dd
from .gf2 import GF2Matrix, nullspace
from .net import DigitalNet, points
from .validation import check_net, check_q

__all__ = [
    "QualityReport",
    "t_value",
    "wafom",
    "wafom_fast",
    "wafom_dual_oracle",
    "quality_report",
    "DUAL_ORACLE_MAX_BITS",
]

log = logging.getLogger(__name__)

DUAL_ORACLE_MAX_BITS = 24


# t-value ---------------------------------------------------------------------

def _insert(basis: list[int], v: int):
    """Reduce ``v`` against a descending echelon basis; None if it reduces to zero."""
    for b in basis:
        v = min(v, v ^ b)
    if not v:
        return None
    new = list(basis)
    insort(new, v, key=lambda x: -x)
    return new


def _all_independent(rows: list[list[int]], k: int) -> bool:
    """True if every choice of d_1 + ... + d_s = k leading rows is independent."""
    s = len(rows)

    def dfs(i, remaining, basis):
        if i == s - 1:
            for r in range(remaining):
                basis = _insert(basis, rows[i][r])
                if basis is None:
                    return False
            return True
        if not dfs(i + 1, remaining, basis):
            return False
        for d in range(1, remaining + 1):
            basis = _insert(basis, rows[i][d - 1])
            # a dependent prefix extends to a full composition via the last dimension
            if basis is None or not dfs(i + 1, remaining - d, basis):
                return False
        return True

    return dfs(0, k, [])


def t_value(net: DigitalNet) -> int:
    """Exact quality parameter t of a digital net.

    The strength ``k = m - t`` is the largest k such that, for every
    composition ``d_1 + ... + d_s = k``, the first ``d_i`` rows of each
    ``C_i`` are jointly linearly independent.  Strengths are tried upward
    and the search stops at the first failing k.
    """
    check_net(net, need_m_le_n=True)
    m = net.m
    rows = [C.row_ints()[:m] for C in net.gen]
    k = 0
    while k < m and _all_independent(rows, k + 1):
        k += 1
    return m - k


# WAFOM -----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _digit_factors(q: int, n: int):
    """Double-double factors 1 + q**-(j+1) and 1 - q**-(j+1) for digits j = 1..n."""
    plus = [_dd.from_fraction(1 + Fraction(1, q ** (j + 1))) for j in range(1, n + 1)]
    minus = [_dd.from_fraction(1 - Fraction(1, q ** (j + 1))) for j in range(1, n + 1)]
    return np.array(plus), np.array(minus)


@lru_cache(maxsize=None)
def _chunk_tables(q: int, n: int):
    """Per 8-digit chunk: (shift, mask, hi table, lo table) of exact partial products."""
    tables = []
    for start in range(0, n, 8):
        width = min(8, n - start)
        shift = n - start - width
        hi = np.empty(1 << width)
        lo = np.empty(1 << width)
        for b in range(1 << width):
            prod = Fraction(1)
            for t in range(1, width + 1):
                j = start + t
                sign = -1 if (b >> (width - t)) & 1 else 1
                prod *= 1 + sign * Fraction(1, q ** (j + 1))
            hi[b], lo[b] = _dd.from_fraction(prod)
        tables.append((np.uint64(shift), np.uint64((1 << width) - 1), hi, lo))
    return tables


# a double-double result is accepted when its error bound is below this fraction of it
_DD_ACCEPT = 1e-14


def _dd_mean_minus_one(phi, plo, size: int, n_mults: int):
    """Mean of (P - 1) in double-double plus an a-posteriori absolute error bound."""
    d, e = _dd.two_sum(phi, -1.0)
    thi, tlo = _dd.quick_two_sum(d, e + plo)
    hi, lo = _dd.pairwise_sum(thi, tlo)
    value = (hi + lo) / size
    scale = float(np.mean(np.abs(phi))) + 1.0
    bound = (n_mults + math.log2(max(size, 2)) + 8) * 2.0**-100 * scale
    return value, bound


def _exact_mean_minus_one(products, denom: int, size: int) -> float:
    total = sum(products.tolist())
    return float(Fraction(total - size * denom, size * denom))


@lru_cache(maxsize=None)
def _digit_numerators(q: int, n: int):
    return np.array([[q ** (j + 1) + 1, q ** (j + 1) - 1] for j in range(1, n + 1)], dtype=object)


@lru_cache(maxsize=None)
def _chunk_numerators(q: int, n: int):
    out = []
    for start in range(0, n, 8):
        width = min(8, n - start)
        t = np.empty(1 << width, dtype=object)
        for b in range(1 << width):
            v = 1
            for k in range(1, width + 1):
                j = start + k
                v *= q ** (j + 1) - 1 if (b >> (width - k)) & 1 else q ** (j + 1) + 1
            t[b] = v
        out.append(t)
    return out


def _denominator(q: int, n: int, s: int) -> int:
    return q ** (s * sum(j + 1 for j in range(1, n + 1)))


def _bits(col, n, j):
    return ((col >> np.uint64(n - j)) & np.uint64(1)).astype(np.intp)


def _wafom_naive_exact(X: np.ndarray, n: int, q: int) -> float:
    nums = _digit_numerators(q, n)
    P = np.ones(X.shape[0], dtype=object)
    for i in range(X.shape[1]):
        for j in range(1, n + 1):
            P = P * nums[j - 1][_bits(X[:, i], n, j)]
    return _exact_mean_minus_one(P, _denominator(q, n, X.shape[1]), X.shape[0])


def _wafom_fast_exact(X: np.ndarray, n: int, q: int) -> float:
    tables = _chunk_tables(q, n)
    nums = _chunk_numerators(q, n)
    P = np.ones(X.shape[0], dtype=object)
    for i in range(X.shape[1]):
        for (shift, mask, _, _), t in zip(tables, nums):
            P = P * t[((X[:, i] >> shift) & mask).astype(np.intp)]
    return _exact_mean_minus_one(P, _denominator(q, n, X.shape[1]), X.shape[0])


def _wafom_naive_coords(X: np.ndarray, n: int, q: int) -> float:
    plus, minus = _digit_factors(q, n)
    N, s = X.shape
    phi = np.ones(N)
    plo = np.zeros(N)
    for i in range(s):
        col = X[:, i]
        for j in range(1, n + 1):
            bit = _bits(col, n, j).astype(bool)
            fhi = np.where(bit, minus[j - 1, 0], plus[j - 1, 0])
            flo = np.where(bit, minus[j - 1, 1], plus[j - 1, 1])
            phi, plo = _dd.mul(phi, plo, fhi, flo)
    value, bound = _dd_mean_minus_one(phi, plo, N, s * n)
    if bound > _DD_ACCEPT * abs(value):
        return _wafom_naive_exact(X, n, q)
    return value


def _wafom_fast_coords(X: np.ndarray, n: int, q: int) -> float:
    tables = _chunk_tables(q, n)
    N, s = X.shape
    phi = plo = None
    for i in range(s):
        col = X[:, i]
        for shift, mask, thi, tlo in tables:
            idx = ((col >> shift) & mask).astype(np.intp)
            if phi is None:
                phi, plo = thi[idx], tlo[idx]
            else:
                phi, plo = _dd.mul(phi, plo, thi[idx], tlo[idx])
    value, bound = _dd_mean_minus_one(phi, plo, N, s * len(tables))
    if bound > _DD_ACCEPT * abs(value):
        return _wafom_fast_exact(X, n, q)
    return value


def wafom(net: DigitalNet, q: int = 2) -> float:
    """WAFOM by the per-point product formula, one factor per digit.

    ``mean over points of prod_{i,j} (1 + (-1)**x_ij * q**-(j+1)) - 1``.
    """
    q = check_q(q)
    check_net(net, need_points=True)
    return _wafom_naive_coords(points(net), net.n, q)


def wafom_fast(net: DigitalNet, q: int = 2) -> float:
    """Same value as :func:`wafom` using 256-entry tables per 8-digit chunk."""
    q = check_q(q)
    check_net(net, need_points=True)
    return _wafom_fast_coords(points(net), net.n, q)


def _byte_weight_tables(n: int, nbits: int):
    # bit b of the dual vector is digit (b % n) + 1 of dimension b // n; weight = digit + 1
    weight = [(b % n) + 2 for b in range(nbits)]
    tables = []
    for start in range(0, nbits, 8):
        t = np.zeros(256, dtype=np.int64)
        for v in range(256):
            t[v] = sum(weight[start + k] for k in range(8) if (v >> k) & 1 and start + k < nbits)
        tables.append(t)
    return tables


def wafom_dual_oracle(net: DigitalNet, q: int = 2) -> float:
    """WAFOM as the sum of ``q**-mu'(A)`` over non-zero A in the dual space.

    ``mu'(A) = sum (j + 1) a_ij``.  Enumerates the whole dual space, so only
    nets with ``s * n <= 24`` are accepted.
    """
    q = check_q(q)
    check_net(net)
    nbits = net.s * net.n
    if nbits > DUAL_ORACLE_MAX_BITS:
        raise ValueError(f"dual enumeration needs s*n <= {DUAL_ORACLE_MAX_BITS}, got {nbits}")
    dense = [C.to_dense() for C in net.gen]
    # row k: the point generated by h = 2**k, flattened with bit i*n + (j-1) = digit j of dim i
    G = np.concatenate(dense, axis=0).T if net.m else np.zeros((0, nbits), dtype=np.uint8)
    basis = nullspace(GF2Matrix.from_dense(G.reshape(net.m, nbits)))
    vals = np.zeros(1, dtype=np.uint32)
    for b in basis:
        vals = np.concatenate([vals, vals ^ np.uint32(b)])
    vals = vals[1:]  # drop A = 0
    if vals.size == 0:
        return 0.0
    mu = np.zeros(vals.size, dtype=np.int64)
    for c, table in enumerate(_byte_weight_tables(net.n, nbits)):
        mu += table[(vals >> np.uint32(8 * c)) & np.uint32(0xFF)]
    counts = np.bincount(mu)
    base = 0.5 if q == 2 else 0.25
    return math.fsum(int(cnt) * base**w for w, cnt in enumerate(counts) if cnt)


# report ----------------------------------------------------------------------

@dataclass
class QualityReport:
    t: int | None
    wafom: float
    q: int
    m: int
    s: int
    n: int
    full_rank: bool = True
    timings: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        """Deterministic fields only (no timings)."""
        return {"t": self.t, "wafom": self.wafom, "q": self.q, "s": self.s, "m": self.m, "n": self.n}


def quality_report(net: DigitalNet, q: int = 2, *, fast: bool = True) -> QualityReport:
    """t-value (when m <= n) and WAFOM of ``net``."""
    q = check_q(q)
    check_net(net, need_points=True)
    timings = {}
    t0 = time.perf_counter()
    t = t_value(net) if net.m <= net.n else None
    timings["t_value"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    w = wafom_fast(net, q) if fast else wafom(net, q)
    timings["wafom"] = time.perf_counter() - t0
    full = net.full_column_rank()
    if not full:
        log.warning("generating matrices of %r lack full column rank; points repeat", net)
    return QualityReport(t=t, wafom=w, q=q, m=net.m, s=net.s, n=net.n, full_rank=full, timings=timings)
