import itertools

import numpy as np
import pytest

from wafomnet import DigitalNet, build_sobol, load_direction_numbers

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def entries():
    return load_direction_numbers()


@pytest.fixture(scope="session")
def sobol(entries):
    cache = {}

    def make(s, m, n=32):
        key = (s, m, n)
        if key not in cache:
            cache[key] = build_sobol(entries, s, m, n)
        return cache[key]

    return make


def random_net(rng, s, m, n):
    return DigitalNet.from_dense(rng.integers(0, 2, size=(s, n, m), dtype=np.uint8))


# independent oracles ---------------------------------------------------------

def schoolbook_multiply(A, B):
    """Per-entry XOR of ANDs on plain lists."""
    rows, inner = len(A), len(B)
    cols = len(B[0]) if B else 0
    out = [[0] * cols for _ in range(rows)]
    for r in range(rows):
        for c in range(cols):
            acc = 0
            for k in range(inner):
                acc ^= A[r][k] & B[k][c]
            out[r][c] = acc
    return out


def column_echelon_rank(A):
    """Rank by eliminating on columns of a list-of-lists 0/1 matrix."""
    cols = [list(col) for col in zip(*A)] if A else []
    rank = 0
    nrows = len(A)
    for r in range(nrows):
        pivot = next((c for c in range(rank, len(cols)) if cols[c][r]), None)
        if pivot is None:
            continue
        cols[rank], cols[pivot] = cols[pivot], cols[rank]
        for c in range(len(cols)):
            if c != rank and cols[c][r]:
                cols[c] = [x ^ y for x, y in zip(cols[c], cols[rank])]
        rank += 1
    return rank


def box_counting_is_net(X_int, n, m, t):
    """Every elementary box of volume 2**(t-m) holds exactly 2**t points.

    ``X_int`` holds packed n-bit coordinates (digit 1 in bit n-1).
    """
    N, s = X_int.shape
    k = m - t
    for d in itertools.product(range(k + 1), repeat=s):
        if sum(d) != k:
            continue
        key = np.zeros(N, dtype=np.int64)
        for i, di in enumerate(d):
            top = (X_int[:, i] >> np.uint64(n - di)).astype(np.int64) if di else np.zeros(N, np.int64)
            key = (key << di) | top
        counts = np.bincount(key, minlength=1 << k)
        if counts.size != 1 << k or not np.all(counts == (1 << t)):
            return False
    return True


def box_counting_t_value(X_int, n, m):
    for t in range(m + 1):
        if box_counting_is_net(X_int, n, m, t):
            return t
    raise AssertionError("unreachable: every set is an (m, m, s)-net")


def genz_quadrature(inst, rtol=1e-12):
    """Adaptive cubature of a Genz instance.

    Kinks (family 5) and jumps (family 6) sit on the planes x_i = u_i, so the
    cube is cut there first and each smooth piece is integrated separately.
    """
    from scipy.integrate import cubature

    from wafomnet.genz import genz_eval

    s = inst.s
    f = lambda x: genz_eval(inst, x)  # noqa: E731
    if inst.family == 5:
        pieces = []
        for sides in itertools.product((0, 1), repeat=s):
            lo = [inst.u[i] if side else 0.0 for i, side in enumerate(sides)]
            hi = [1.0 if side else inst.u[i] for i, side in enumerate(sides)]
            pieces.append((lo, hi))
    elif inst.family == 6:
        hi = [inst.u[i] if i < 2 else 1.0 for i in range(s)]
        pieces = [([0.0] * s, hi)]
    else:
        pieces = [([0.0] * s, [1.0] * s)]
    total = 0.0
    for lo, hi in pieces:
        if any(h <= l for l, h in zip(lo, hi)):
            continue
        res = cubature(f, np.array(lo), np.array(hi), rtol=rtol, atol=1e-300)
        assert res.status == "converged", res
        total += float(res.estimate)
    return total
