"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

__all__ = ["check_net", "check_q", "check_scramble_set", "check_indices", "MAX_POINT_BITS"]

# Point coordinates are held as one uint64 per dimension.
MAX_POINT_BITS = 64


def check_q(q) -> int:
    if q not in (2, 4):
        raise ValueError(f"WAFOM base q must be 2 or 4, got {q!r}")
    return int(q)


def check_net(net, *, need_m_le_n: bool = False, need_points: bool = False):
    """Return ``net`` if it is a usable :class:`~wafomnet.net.DigitalNet`.

    Parameters
    ----------
    need_m_le_n : bool
        Require at least ``m`` rows per generating matrix (t-value domain).
    need_points : bool
        Require ``n <= 64`` so points fit the packed coordinate layout.
    """
    from .net import DigitalNet

    if not isinstance(net, DigitalNet):
        raise TypeError(f"expected a DigitalNet, got {type(net).__name__}")
    if need_m_le_n and net.m > net.n:
        raise ValueError(f"t-value needs m <= n, got m={net.m}, n={net.n}")
    if need_points and net.n > MAX_POINT_BITS:
        raise ValueError(f"point enumeration supports n <= {MAX_POINT_BITS}, got n={net.n}")
    return net


def check_scramble_set(scr, net):
    if scr.s != net.s or scr.n != net.n:
        raise ValueError(
            f"scramble set (s={scr.s}, n={scr.n}) does not match net (s={net.s}, n={net.n})"
        )
    return scr


def check_indices(h, m: int):
    import numpy as np

    h = np.asarray(h)
    if h.dtype.kind not in "iu":
        raise TypeError(f"point indices must be integers, got dtype {h.dtype}")
    if h.size and (h.min() < 0 or h.max() >= (1 << m)):
        raise ValueError(f"point index out of range [0, 2**{m})")
    return h.astype(np.uint64)
