"""Genz test-function suite and the median-relative-error benchmark."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.special import erf

from .gf2 import substream
from .net import DigitalNet, points_real

__all__ = [
    "GenzInstance",
    "BenchResult",
    "DEFAULT_H",
    "FAMILY_NAMES",
    "genz_eval",
    "genz_exact",
    "generate_instances",
    "run_bench",
    "write_csv",
    "format_csv",
    "median",
]

log = logging.getLogger(__name__)

# renormalisation targets sum(a) = h_j, families 1..6
DEFAULT_H = {1: 4.5, 2: 3.625, 3: 0.925, 4: 3.515, 5: 10.2, 6: 2.15}
FAMILY_NAMES = {
    1: "oscillatory",
    2: "product peak",
    3: "corner peak",
    4: "gaussian",
    5: "continuous",
    6: "discontinuous",
}
CSV_HEADER = ["net", "family", "s", "m", "N", "median_log10_rel_err", "samples", "seed"]


@dataclass(frozen=True)
class GenzInstance:
    family: int
    s: int
    a: tuple
    u: tuple
    exact: float

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.asarray(self.a, dtype=np.float64).tobytes())
        h.update(np.asarray(self.u, dtype=np.float64).tobytes())
        h.update(bytes([self.family]))
        return h.hexdigest()


@dataclass(frozen=True)
class BenchResult:
    net: str
    family: int
    s: int
    m: int
    N: int
    median_log10_rel_err: float
    samples: int
    seed: int
    instance_hash: str = ""

    def row(self) -> list:
        return [self.net, self.family, self.s, self.m, self.N,
                repr(float(self.median_log10_rel_err)), self.samples, self.seed]


def _check_family(family: int) -> None:
    if family not in DEFAULT_H:
        raise ValueError(f"Genz family must be in 1..6, got {family!r}")


def genz_eval(inst: GenzInstance, x) -> np.ndarray | float:
    """Evaluate the instance's integrand at one point (shape (s,)) or many (shape (N, s))."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    a = np.asarray(inst.a)
    u = np.asarray(inst.u)
    f = inst.family
    if f == 1:
        out = np.cos(2 * np.pi * u[0] + X @ a)
    elif f == 2:
        out = np.prod(1.0 / (a**-2 + (X - u) ** 2), axis=1)
    elif f == 3:
        out = (1.0 + X @ a) ** (-(inst.s + 1))
    elif f == 4:
        out = np.exp(-np.sum(a**2 * (X - u) ** 2, axis=1))
    elif f == 5:
        out = np.exp(-np.sum(a * np.abs(X - u), axis=1))
    elif f == 6:
        cut = X[:, 0] > u[0]
        if inst.s > 1:
            cut |= X[:, 1] > u[1]
        out = np.where(cut, 0.0, np.exp(X @ a))
    else:
        _check_family(f)
    return float(out[0]) if single else out


def genz_exact(family: int, a, u, s: int | None = None) -> float:
    """Closed-form integral over the unit cube."""
    _check_family(family)
    a = [float(v) for v in a]
    u = [float(v) for v in u]
    s = len(a) if s is None else s
    if len(a) != s or len(u) != s:
        raise ValueError(f"a and u must have length s={s}")
    if any(v <= 0 for v in a):
        raise ValueError("difficulty parameters must be positive")
    if family == 1:
        amp = math.prod(2.0 * math.sin(ai / 2.0) / ai for ai in a)
        return amp * math.cos(2 * math.pi * u[0] + math.fsum(a) / 2.0)
    if family == 2:
        return math.prod(ai * (math.atan(ai * (1 - ui)) + math.atan(ai * ui)) for ai, ui in zip(a, u))
    if family == 3:
        terms = []
        for r in range(s + 1):
            for sub in itertools.combinations(a, r):
                terms.append((-1) ** r / (1.0 + math.fsum(sub)))
        return math.fsum(terms) / (math.factorial(s) * math.prod(a))
    if family == 4:
        return math.prod(
            math.sqrt(math.pi) / (2 * ai) * (float(erf(ai * (1 - ui))) + float(erf(ai * ui)))
            for ai, ui in zip(a, u)
        )
    if family == 5:
        return math.prod(
            (2.0 - math.exp(-ai * ui) - math.exp(-ai * (1 - ui))) / ai for ai, ui in zip(a, u)
        )
    # family 6: the indicator bounds only the first two coordinates
    out = 1.0
    for i, (ai, ui) in enumerate(zip(a, u)):
        top = min(ui, 1.0) if i < 2 else 1.0
        out *= math.expm1(ai * top) / ai
    return out


def generate_instances(family: int, s: int, h: float | None = None, samples: int = 20,
                       rng: np.random.Generator | None = None) -> list[GenzInstance]:
    """Draw ``samples`` instances with a, u uniform on [0, 1]^s and sum(a) rescaled to h."""
    _check_family(family)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    h = DEFAULT_H[family] if h is None else float(h)
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    rng = np.random.default_rng() if rng is None else rng
    out = []
    while len(out) < samples:
        a = rng.random(s)
        u = rng.random(s)
        total = a.sum()
        if total == 0 or not np.all(a > 0):
            continue
        a = a * (h / total)
        exact = genz_exact(family, a, u, s)
        if exact == 0 or not math.isfinite(exact):
            log.info("redrawing family %d instance with exact integral %r", family, exact)
            continue
        out.append(GenzInstance(family, s, tuple(a.tolist()), tuple(u.tolist()), exact))
    return out


def median(values) -> float:
    v = sorted(values)
    k = len(v)
    if k == 0:
        raise ValueError("median of empty sequence")
    mid = k // 2
    return v[mid] if k % 2 else (v[mid - 1] + v[mid]) / 2


def log10_rel_err(inst: GenzInstance, approx: float) -> float:
    err = abs(inst.exact - approx) / abs(inst.exact)
    return math.log10(max(err, np.finfo(np.float64).tiny))


def run_bench(
    nets: Mapping[str, Mapping[int, DigitalNet]],
    families: Sequence[int] = (1, 2, 3, 4, 5, 6),
    s: int | None = None,
    samples: int = 20,
    seed: int = 0,
    h: Mapping[int, float] | None = None,
) -> list[BenchResult]:
    """Median log10 relative error per (net label, family, m).

    ``nets`` maps a label to ``{m: DigitalNet}``.  Every net sees the same
    instance list for a given family (drawn from ``substream(seed, family)``).
    """
    if not nets:
        return []
    dims = {net.s for by_m in nets.values() for net in by_m.values()}
    if s is None:
        s = dims.pop() if len(dims) == 1 else None
    if s is None or dims - {s}:
        raise ValueError(f"all nets must share one dimension, got {sorted(dims)}")
    h = dict(DEFAULT_H, **(h or {}))
    instances = {f: generate_instances(f, s, h[f], samples, substream(seed, f)) for f in families}
    digests = {f: hashlib.sha256("".join(i.digest() for i in insts).encode()).hexdigest()
               for f, insts in instances.items()}
    results = []
    for label in sorted(nets):
        for m in sorted(nets[label]):
            net = nets[label][m]
            X = points_real(net)
            for f in sorted(families):
                errs = [log10_rel_err(inst, float(np.mean(genz_eval(inst, X)))) for inst in instances[f]]
                results.append(BenchResult(
                    net=label, family=f, s=s, m=m, N=net.size,
                    median_log10_rel_err=median(errs), samples=samples, seed=seed,
                    instance_hash=digests[f],
                ))
    results.sort(key=lambda r: (r.net, r.family, r.m))
    return results


def format_csv(results: Sequence[BenchResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow(r.row())
    return buf.getvalue()


def write_csv(results: Sequence[BenchResult], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(results))
