"""Sobol' generating matrices from Joe-Kuo style direction-number tables."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .gf2 import GF2Matrix
from .net import DigitalNet

__all__ = ["DirectionEntry", "load_direction_numbers", "build_sobol", "default_direction_file"]

DEFAULT_TABLE = "new-joe-kuo-6.1111"


@dataclass(frozen=True)
class DirectionEntry:
    d: int
    s_deg: int
    a: int
    m_init: tuple

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension index must be >= 2, got {self.d}")
        if self.s_deg < 1 or len(self.m_init) != self.s_deg:
            raise ValueError(f"dimension {self.d}: degree {self.s_deg} needs {self.s_deg} initial values")
        if not 0 <= self.a < (1 << max(self.s_deg - 1, 0)) or (self.s_deg == 1 and self.a):
            raise ValueError(f"dimension {self.d}: coefficient a={self.a} out of range")
        for k, mk in enumerate(self.m_init, start=1):
            if mk % 2 == 0 or not 0 < mk < (1 << k):
                raise ValueError(f"dimension {self.d}: m_{k}={mk} must be odd and < 2**{k}")


def default_direction_file() -> Path:
    """Bundled table: the first 1111 dimensions of Joe and Kuo's new-joe-kuo-6.21201."""
    return Path(str(resources.files("wafomnet") / "data" / DEFAULT_TABLE))


def load_direction_numbers(path=None) -> list[DirectionEntry]:
    """Parse a direction-number file (header line, then ``d s a m_1 ... m_s`` per line)."""
    path = default_direction_file() if path is None else Path(path)
    entries = []
    with open(path) as fh:
        fh.readline()
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                nums = [int(tok) for tok in line.split()]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer token in {line.strip()!r}") from None
            if len(nums) < 4 or len(nums) != 3 + nums[1]:
                raise ValueError(f"{path}:{lineno}: expected 'd s a m_1..m_s', got {line.strip()!r}")
            try:
                entries.append(DirectionEntry(nums[0], nums[1], nums[2], tuple(nums[3:])))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return sorted(entries, key=lambda e: e.d)


def _direction_integers(entry: DirectionEntry, m: int) -> list[int]:
    """m_1..m_m for one dimension via the standard Sobol' recurrence."""
    deg = entry.s_deg
    mk = list(entry.m_init[:m])
    for k in range(deg, m):
        # k is 0-based index of m_{k+1}
        v = mk[k - deg] ^ (mk[k - deg] << deg)
        for l in range(1, deg):
            if (entry.a >> (deg - 1 - l)) & 1:
                v ^= mk[k - l] << l
        mk.append(v)
    return mk


def build_sobol(entries, s: int, m: int, n: int = 32) -> DigitalNet:
    """Sobol' net with ``2**m`` points, ``s`` dimensions and ``n``-digit precision.

    Column k of C_i holds the binary expansion of v_k = m_k / 2**k, so every
    C_i is upper triangular with unit diagonal and zero below row m.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if n > 64:
        raise ValueError(f"n must be <= 64, got {n}")
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    by_dim = {e.d: e for e in entries}
    missing = [d for d in range(2, s + 1) if d not in by_dim]
    if missing:
        raise ValueError(f"no direction numbers for dimension(s) {missing[:5]}")
    mats = [np.eye(n, m, dtype=np.uint8)]
    for d in range(2, s + 1):
        mk = _direction_integers(by_dim[d], m)
        C = np.zeros((n, m), dtype=np.uint8)
        for k in range(1, m + 1):
            for j in range(1, k + 1):
                C[j - 1, k - 1] = (mk[k - 1] >> (k - j)) & 1
        mats.append(C)
    for i, C in enumerate(mats):
        top = C[:m, :m]
        assert np.all(np.diag(top) == 1) and not np.tril(top, -1).any(), f"dimension {i + 1}"
    return DigitalNet(tuple(GF2Matrix.from_dense(C) for C in mats))
