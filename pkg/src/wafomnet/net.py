"""Digital nets over GF(2): point enumeration, linear scrambling, interlacing, file I/O.

Point coordinates are packed as one ``uint64`` per dimension with digit 1 (the
most significant binary digit of the coordinate) in bit ``n - 1``, so the
integer value ``v`` of coordinate ``i`` maps to the real ``(v + 1/2) / 2**n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .gf2 import GF2Matrix, multiply, random_nonsingular_lower_triangular
from .validation import MAX_POINT_BITS, check_scramble_set

__all__ = [
    "DigitalNet",
    "ScrambleSet",
    "NetFormatError",
    "point",
    "points",
    "points_real",
    "to_real",
    "scramble",
    "interlace",
    "load_net",
    "save_net",
    "load_scramble",
    "save_scramble",
]


class NetFormatError(ValueError):
    """Malformed net or scramble file."""

    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True, eq=True)
class DigitalNet:
    """A digital net in base 2 defined by ``s`` generating matrices of shape ``n x m``."""

    gen: tuple

    def __post_init__(self):
        gen = tuple(self.gen)
        object.__setattr__(self, "gen", gen)
        if not gen:
            raise ValueError("a digital net needs at least one generating matrix")
        shape = gen[0].shape
        for i, C in enumerate(gen):
            if not isinstance(C, GF2Matrix):
                raise TypeError(f"generating matrix {i + 1} is not a GF2Matrix")
            if C.shape != shape:
                raise ValueError(f"generating matrix {i + 1} has shape {C.shape}, expected {shape}")
        if shape[0] < 1:
            raise ValueError("precision n must be >= 1")

    @property
    def s(self) -> int:
        return len(self.gen)

    @property
    def n(self) -> int:
        return self.gen[0].rows

    @property
    def m(self) -> int:
        return self.gen[0].cols

    @property
    def size(self) -> int:
        return 1 << self.m

    def __hash__(self):
        return hash(self.gen)

    def __repr__(self):
        return f"DigitalNet(s={self.s}, m={self.m}, n={self.n})"

    @classmethod
    def from_dense(cls, mats) -> "DigitalNet":
        return cls(tuple(GF2Matrix.from_dense(a) for a in mats))

    @classmethod
    def from_columns(cls, columns, n: int) -> "DigitalNet":
        """Build from packed columns: ``columns[i][k]`` is column k+1 of C_i, digit 1 in bit n-1."""
        mats = []
        for cols in columns:
            cols = np.asarray(cols, dtype=np.uint64)
            shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
            dense = ((cols[None, :] >> shifts[:, None]) & np.uint64(1)).astype(np.uint8)
            mats.append(GF2Matrix.from_dense(dense.reshape(n, len(cols))))
        return cls(tuple(mats))

    def truncate(self, m: int) -> "DigitalNet":
        """Net built from the first ``m`` columns (the first 2**m points)."""
        if not 0 <= m <= self.m:
            raise ValueError(f"cannot truncate m={self.m} net to m={m}")
        return DigitalNet.from_dense([C.to_dense()[:, :m] for C in self.gen])

    @cached_property
    def columns(self) -> np.ndarray:
        """Packed columns, shape (s, m) uint64; needs n <= 64."""
        if self.n > MAX_POINT_BITS:
            raise ValueError(f"packed columns need n <= {MAX_POINT_BITS}, got n={self.n}")
        weights = np.uint64(1) << np.arange(self.n - 1, -1, -1, dtype=np.uint64)
        out = np.zeros((self.s, self.m), dtype=np.uint64)
        for i, C in enumerate(self.gen):
            if self.m:
                d = C.to_dense().astype(bool)
                out[i] = np.bitwise_or.reduce(np.where(d, weights[:, None], np.uint64(0)), axis=0)
        out.setflags(write=False)
        return out

    def full_column_rank(self) -> bool:
        """True when the 2**m points are pairwise distinct."""
        from .gf2 import rank

        stacked = np.vstack([C.to_dense() for C in self.gen])
        return rank(GF2Matrix.from_dense(stacked)) == self.m


@dataclass(frozen=True, eq=True)
class ScrambleSet:
    """Non-singular lower-triangular n x n matrices L_1..L_s, one per dimension."""

    mats: tuple

    def __post_init__(self):
        mats = tuple(self.mats)
        object.__setattr__(self, "mats", mats)
        if not mats:
            raise ValueError("empty scramble set")
        n = mats[0].rows
        for i, L in enumerate(mats):
            if L.shape != (n, n):
                raise ValueError(f"scramble matrix {i + 1} has shape {L.shape}, expected {(n, n)}")
            if not L.is_lower_unitriangular():
                raise ValueError(f"scramble matrix {i + 1} is not unit lower triangular")

    @property
    def s(self) -> int:
        return len(self.mats)

    @property
    def n(self) -> int:
        return self.mats[0].rows

    def __hash__(self):
        return hash(self.mats)

    @classmethod
    def identity(cls, s: int, n: int) -> "ScrambleSet":
        eye = GF2Matrix.identity(n)
        return cls((eye,) * s)

    @classmethod
    def random(cls, s: int, n: int, rng: np.random.Generator) -> "ScrambleSet":
        return cls(tuple(random_nonsingular_lower_triangular(n, rng) for _ in range(s)))

    def compose(self, inner: "ScrambleSet") -> "ScrambleSet":
        """Per-dimension product ``self[i] @ inner[i]`` (apply ``inner`` first)."""
        if inner.s != self.s or inner.n != self.n:
            raise ValueError("scramble sets differ in shape")
        return ScrambleSet(tuple(multiply(a, b) for a, b in zip(self.mats, inner.mats)))


def point(net: DigitalNet, h: int) -> GF2Matrix:
    """The h-th point as an s x n bit matrix; row i is C_i times the digit vector of h."""
    if not 0 <= h < net.size:
        raise ValueError(f"point index {h} out of range [0, {net.size})")
    digits = [[(h >> l) & 1] for l in range(net.m)]
    hvec = GF2Matrix.from_dense(np.array(digits, dtype=np.uint8).reshape(net.m, 1))
    rows = [multiply(C, hvec).to_dense()[:, 0] for C in net.gen]
    return GF2Matrix.from_dense(np.array(rows, dtype=np.uint8))


def points(net: DigitalNet) -> np.ndarray:
    """All 2**m points as packed coordinates, shape (2**m, s), ordered by h."""
    cols = net.columns
    X = np.zeros((1, net.s), dtype=np.uint64)
    for k in range(net.m):
        X = np.concatenate([X, X ^ cols[:, k]])
    return X


def _packed_to_real(X: np.ndarray, n: int) -> np.ndarray:
    if n <= 52:
        return np.ldexp((2 * X + np.uint64(1)).astype(np.float64), -(n + 1))
    # top bits only survive the conversion; the shift is below double resolution
    return np.ldexp(X.astype(np.float64) + 0.5, -n)


def points_real(net: DigitalNet) -> np.ndarray:
    """All 2**m points in (0, 1)^s, including the 2**-(n+1) shift."""
    return _packed_to_real(points(net), net.n)


def to_real(p: GF2Matrix) -> np.ndarray:
    """Map an s x n bit matrix to its shifted point in (0, 1)^s."""
    n = p.cols
    out = []
    for i in range(p.rows):
        d = p.to_dense()[i]
        v = 0
        for bit in d:
            v = (v << 1) | int(bit)
        out.append((2 * v + 1) / (1 << (n + 1)))
    return np.array(out, dtype=np.float64)


def scramble(net: DigitalNet, L: ScrambleSet) -> DigitalNet:
    """Linearly scrambled net with generating matrices L_i C_i."""
    check_scramble_set(L, net)
    return DigitalNet(tuple(multiply(Li, Ci) for Li, Ci in zip(L.mats, net.gen)))


def interlace(mats: Sequence[GF2Matrix], alpha: int) -> list[GF2Matrix]:
    """Interlace groups of ``alpha`` square m x m matrices into (m*alpha) x m matrices.

    Row r of output k takes row ``r // alpha`` of input ``k*alpha + r % alpha``
    (0-based), so the rows of each group are dealt out round-robin.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if len(mats) % alpha:
        raise ValueError(f"{len(mats)} matrices cannot be split into groups of {alpha}")
    if not mats:
        return []
    m = mats[0].cols
    for i, M in enumerate(mats):
        if M.shape != (m, m):
            raise ValueError(f"matrix {i + 1} has shape {M.shape}, expected {(m, m)}")
    out = []
    for k in range(len(mats) // alpha):
        group = np.stack([M.to_dense() for M in mats[k * alpha:(k + 1) * alpha]])
        # (alpha, m, m) -> rows ordered (row 0 of each, row 1 of each, ...)
        out.append(GF2Matrix.from_dense(group.transpose(1, 0, 2).reshape(m * alpha, m)))
    return out


# file formats ---------------------------------------------------------------

def _write_blocks(fh, mats):
    for i, M in enumerate(mats):
        if i:
            fh.write("\n")
        for row in M.to_dense():
            fh.write("".join("1" if b else "0" for b in row) + "\n")


def save_net(net: DigitalNet, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{net.s} {net.n} {net.m}\n")
        _write_blocks(fh, net.gen)


def save_scramble(L: ScrambleSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{L.s} {L.n}\n")
        _write_blocks(fh, L.mats)


def _read_header(path, lines, count):
    if not lines:
        raise NetFormatError(path, 1, "empty file")
    parts = lines[0].split()
    if len(parts) != count or not all(p.isdigit() for p in parts):
        raise NetFormatError(path, 1, f"header must hold {count} non-negative integers, got {lines[0]!r}")
    return [int(p) for p in parts]


def _read_blocks(path, lines, nblocks, nrows, ncols):
    blocks = []
    ln = 1  # index into lines (0-based); line number is ln + 1
    for b in range(nblocks):
        if b:
            if ln >= len(lines) or lines[ln].strip():
                raise NetFormatError(path, ln + 1, f"expected blank line before block for dimension {b + 1}")
            ln += 1
        rows = []
        for r in range(nrows):
            if ln >= len(lines) or not lines[ln].strip():
                raise NetFormatError(
                    path, ln + 1,
                    f"block for dimension {b + 1} has {r} rows, expected {nrows}",
                )
            text = lines[ln].strip()
            if len(text) != ncols:
                raise NetFormatError(path, ln + 1, f"row has {len(text)} entries, expected {ncols}")
            if set(text) - {"0", "1"}:
                raise NetFormatError(path, ln + 1, f"non-binary character in {text!r}")
            rows.append([int(ch) for ch in text])
            ln += 1
        blocks.append(GF2Matrix.from_dense(np.array(rows, dtype=np.uint8).reshape(nrows, ncols)))
    if any(line.strip() for line in lines[ln:]):
        extra = ln + next(i for i, line in enumerate(lines[ln:]) if line.strip())
        raise NetFormatError(path, extra + 1, "unexpected content after last block")
    return blocks


def load_net(path) -> DigitalNet:
    """Read a net file: header ``s n m`` then s blank-separated blocks of n rows of m bits."""
    lines = Path(path).read_text().splitlines()
    s, n, m = _read_header(path, lines, 3)
    if s < 1 or n < 1:
        raise NetFormatError(path, 1, f"need s >= 1 and n >= 1, got s={s}, n={n}")
    return DigitalNet(tuple(_read_blocks(path, lines, s, n, m)))


def load_scramble(path) -> ScrambleSet:
    lines = Path(path).read_text().splitlines()
    s, n = _read_header(path, lines, 2)
    if s < 1 or n < 1:
        raise NetFormatError(path, 1, f"need s >= 1 and n >= 1, got s={s}, n={n}")
    mats = _read_blocks(path, lines, s, n, n)
    for i, L in enumerate(mats):
        if not L.is_lower_unitriangular():
            raise NetFormatError(path, 1, f"matrix {i + 1} is not unit lower triangular")
    return ScrambleSet(tuple(mats))
