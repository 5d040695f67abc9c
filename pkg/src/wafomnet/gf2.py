"""Bit-packed linear algebra over GF(2).

Rows are stored as little-endian arrays of 64-bit words: column ``c``
(0-based) lives in bit ``c % 64`` of word ``c // 64``.  Padding bits past the
last column are always zero.
"""

from __future__ import annotations

import numpy as np

WORD = 64

__all__ = [
    "GF2Matrix",
    "multiply",
    "rank",
    "random_nonsingular_lower_triangular",
    "substream",
    "nullspace",
]


def _n_words(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent PCG64 stream keyed by ``(seed, index)``.

    Streams are derived with :class:`numpy.random.SeedSequence` spawn keys, so
    the draws are bit-identical across platforms and numpy versions that keep
    the PCG64 stream contract.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


class GF2Matrix:
    """Immutable matrix over GF(2) with bit-packed rows.

    Parameters
    ----------
    rows, cols : int
        Shape of the matrix.
    words : ndarray of uint64, shape (rows, ceil(cols / 64))
        Packed row storage.  Copied and frozen on construction.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words=None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        nw = _n_words(cols)
        if words is None:
            arr = np.zeros((rows, nw), dtype=np.uint64)
        else:
            arr = np.array(words, dtype=np.uint64).reshape(rows, nw)
            tail = cols % WORD
            if nw and tail:
                arr[:, -1] &= np.uint64((1 << tail) - 1)
        arr.setflags(write=False)
        object.__setattr__(self, "rows", int(rows))
        object.__setattr__(self, "cols", int(cols))
        object.__setattr__(self, "words", arr)

    def __setattr__(self, name, value):
        raise AttributeError("GF2Matrix is immutable")

    # construction helpers
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, a) -> "GF2Matrix":
        """Build from a 2-D array-like of 0/1 entries."""
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {a.shape}")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        rows, cols = a.shape
        nw = _n_words(cols)
        if rows == 0 or cols == 0:
            return cls(rows, cols)
        packed = np.packbits(a.astype(np.uint8), axis=1, bitorder="little")
        buf = np.zeros((rows, nw * 8), dtype=np.uint8)
        buf[:, : packed.shape[1]] = packed
        words = buf.view("<u8").astype(np.uint64)
        return cls(rows, cols, words)

    @classmethod
    def from_row_ints(cls, rows, cols: int) -> "GF2Matrix":
        """Build from Python ints, bit ``c`` of ``rows[r]`` being entry (r, c)."""
        rows = [int(r) for r in rows]
        nw = _n_words(cols)
        words = np.zeros((len(rows), nw), dtype=np.uint64)
        mask = (1 << WORD) - 1
        for r, v in enumerate(rows):
            if v >> cols:
                raise ValueError(f"row {r} has bits beyond column {cols}")
            for w in range(nw):
                words[r, w] = (v >> (WORD * w)) & mask
        return cls(len(rows), cols, words)

    # views
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        """Unpacked ``uint8`` array of shape (rows, cols)."""
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        as_bytes = np.ascontiguousarray(self.words.astype("<u8")).view(np.uint8)
        return np.unpackbits(as_bytes, axis=1, count=self.cols, bitorder="little")

    def row_int(self, r: int) -> int:
        return sum(int(w) << (WORD * i) for i, w in enumerate(self.words[r]))

    def row_ints(self) -> list[int]:
        return [self.row_int(r) for r in range(self.rows)]

    def __getitem__(self, idx) -> int:
        r, c = idx
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"index ({r}, {c}) out of range for shape {self.shape}")
        return int((int(self.words[r, c // WORD]) >> (c % WORD)) & 1)

    @property
    def T(self) -> "GF2Matrix":
        return GF2Matrix.from_dense(self.to_dense().T)

    def is_lower_unitriangular(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self.to_dense()
        return bool(np.all(np.diag(d) == 1) and not np.triu(d, 1).any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        return multiply(self, other)

    def __repr__(self) -> str:
        return f"GF2Matrix(rows={self.rows}, cols={self.cols})"

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_dense())


def multiply(A: GF2Matrix, B: GF2Matrix) -> GF2Matrix:
    """Matrix product over GF(2)."""
    if A.cols != B.rows:
        raise ValueError(f"shape mismatch: {A.shape} x {B.shape}")
    nw = _n_words(B.cols)
    if A.rows == 0 or A.cols == 0 or nw == 0:
        return GF2Matrix(A.rows, B.cols)
    sel = A.to_dense().astype(bool)
    # out[r] = XOR of B rows k where A[r, k] = 1
    picked = np.where(sel[:, :, None], B.words[None, :, :], np.uint64(0))
    return GF2Matrix(A.rows, B.cols, np.bitwise_xor.reduce(picked, axis=1))


def rank(A: GF2Matrix) -> int:
    """Rank over GF(2) by row elimination on a copy of the packed rows."""
    w = A.words.copy()
    r = 0
    for c in range(A.cols):
        if r == A.rows:
            break
        word, bit = divmod(c, WORD)
        col = (w[r:, word] >> np.uint64(bit)) & np.uint64(1)
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            w[[r, p]] = w[[p, r]]
        hit = ((w[:, word] >> np.uint64(bit)) & np.uint64(1)).astype(bool)
        hit[r] = False
        w[hit] ^= w[r]
        r += 1
    return r


def random_nonsingular_lower_triangular(n: int, rng: np.random.Generator) -> GF2Matrix:
    """Uniform draw from the unit lower-triangular n x n matrices over GF(2)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    bits = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
    bits = np.tril(bits, -1)
    bits[np.diag_indices(n)] = 1
    return GF2Matrix.from_dense(bits)


def nullspace(A: GF2Matrix) -> list[int]:
    """Basis of {x : A x = 0} as Python ints (bit c = column c)."""
    rows = A.row_ints()
    pivots = []  # (column, reduced row)
    for v in rows:
        for c, p in pivots:
            if (v >> c) & 1:
                v ^= p
        if v:
            c = (v & -v).bit_length() - 1
            pivots = [(pc, p ^ v if (p >> c) & 1 else p) for pc, p in pivots]
            pivots.append((c, v))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(A.cols):
        if free in pivot_cols:
            continue
        x = 1 << free
        for c, p in pivots:
            if (p >> free) & 1:
                x |= 1 << c
        basis.append(x)
    return basis
