"""Random linear-scrambling search and the naive column-by-column baseline."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gf2 import substream
from .net import DigitalNet, ScrambleSet, save_scramble, scramble
from .quality import _wafom_fast_coords, t_value, wafom, wafom_fast
from .validation import check_net, check_q

__all__ = [
    "SearchConfig",
    "SearchResult",
    "scramble_search",
    "naive_column_search",
    "write_trace",
    "default_threads",
]

log = logging.getLogger(__name__)

THREADS_ENV = "WAFOMNET_THREADS"


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        return max(1, int(value))
    return 1


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of a scrambling search.

    ``M`` random scramble sets are drawn, candidate ``i`` from
    ``substream(seed, i)`` for ``i = 1..M``; the identity is candidate 0 when
    ``include_identity`` is set.
    """

    M: int = 1000
    seed: int = 0
    q: int = 2
    include_identity: bool = True
    objective: str = "minimize"
    debug: bool = False

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        check_q(self.q)
        if self.objective not in ("minimize", "maximize"):
            raise ValueError(f"objective must be 'minimize' or 'maximize', got {self.objective!r}")


@dataclass
class SearchResult:
    best_scramble: ScrambleSet
    best_net: DigitalNet
    best_wafom: float
    candidate_index: int
    trace: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "candidate_index": self.candidate_index,
            "best_wafom": self.best_wafom,
            "trace_length": len(self.trace),
        }


def candidate_scramble(net: DigitalNet, seed: int, index: int) -> ScrambleSet:
    """The scramble set evaluated as candidate ``index`` (0 is the identity)."""
    if index == 0:
        return ScrambleSet.identity(net.s, net.n)
    return ScrambleSet.random(net.s, net.n, substream(seed, index))


def _evaluate(net, cfg, indices):
    out = []
    for i in indices:
        cand = scramble(net, candidate_scramble(net, cfg.seed, i))
        out.append(wafom_fast(cand, cfg.q))
        if cfg.debug and i % 100 == 0:
            assert t_value(cand) == t_value(net), f"candidate {i} changed the t-value"
    return out


def _trace(indices, values, maximize):
    trace = []
    best = None
    for i, w in zip(indices, values):
        if best is None or (w > best if maximize else w < best):
            best = w
            trace.append((i, w))
    return trace


def scramble_search(net: DigitalNet, cfg: SearchConfig, threads: int | None = None) -> SearchResult:
    """Draw ``cfg.M`` random scramblings of ``net`` and keep the extremal WAFOM.

    Ties go to the smallest candidate index.  The result depends only on
    ``(net, cfg)``; ``threads`` only changes how candidates are partitioned.
    """
    check_net(net, need_m_le_n=True, need_points=True)
    threads = default_threads() if threads is None else max(1, int(threads))
    indices = list(range(0 if cfg.include_identity else 1, cfg.M + 1))
    if threads == 1:
        values = _evaluate(net, cfg, indices)
    else:
        chunks = [indices[k::threads] for k in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _evaluate(net, cfg, c), chunks))
        by_index = {}
        for chunk, vals in zip(chunks, parts):
            by_index.update(zip(chunk, vals))
        values = [by_index[i] for i in indices]

    maximize = cfg.objective == "maximize"
    arr = np.asarray(values)
    pos = int(np.argmax(arr) if maximize else np.argmin(arr))  # first occurrence
    best_index = indices[pos]
    best_scr = candidate_scramble(net, cfg.seed, best_index)
    best_net = scramble(net, best_scr)
    checked = wafom(best_net, cfg.q)
    if not np.isclose(checked, values[pos], rtol=1e-12, atol=0.0):
        raise RuntimeError(f"WAFOM paths disagree for candidate {best_index}: {checked} vs {values[pos]}")
    return SearchResult(
        best_scramble=best_scr,
        best_net=best_net,
        best_wafom=checked,
        candidate_index=best_index,
        trace=_trace(indices, values, maximize),
    )


def write_trace(result: SearchResult, path) -> None:
    """JSON lines, one ``{"index": ..., "wafom": ...}`` record per improvement."""
    with open(path, "w") as fh:
        for i, w in result.trace:
            fh.write(json.dumps({"index": i, "wafom": w}) + "\n")


def write_scramble(result: SearchResult, path) -> None:
    save_scramble(result.best_scramble, path)


def _random_column_tuples(rng, count, s, n):
    out = np.empty((count, s), dtype=np.uint64)
    for c in range(count):
        while True:
            cols = rng.integers(0, 2**n, size=s, dtype=np.uint64)
            if cols.any():
                break
        out[c] = cols
    return out


def naive_column_search(
    s: int, n: int, m_max: int, candidates_per_column: int, seed: int, q: int = 2
) -> list[DigitalNet]:
    """Grow generating matrices one column at a time by minimising WAFOM.

    At step m, ``candidates_per_column`` random non-zero column tuples are
    drawn from ``substream(seed, m)`` and the one giving the smallest WAFOM of
    the 2**m-point net is appended.  Returns the nets for m = 1..m_max; each is
    a prefix of the next.
    """
    q = check_q(q)
    if not 1 <= m_max <= n:
        raise ValueError(f"need 1 <= m_max <= n, got m_max={m_max}, n={n}")
    if candidates_per_column < 1:
        raise ValueError("candidates_per_column must be >= 1")
    if n > 64:
        raise ValueError(f"n must be <= 64, got {n}")
    columns = np.zeros((s, 0), dtype=np.uint64)
    X = np.zeros((1, s), dtype=np.uint64)
    nets = []
    for m in range(1, m_max + 1):
        cands = _random_column_tuples(substream(seed, m), candidates_per_column, s, n)
        scores = [_wafom_fast_coords(np.concatenate([X, X ^ c]), n, q) for c in cands]
        best = cands[int(np.argmin(scores))]
        columns = np.concatenate([columns, best[:, None]], axis=1)
        X = np.concatenate([X, X ^ best])
        nets.append(DigitalNet.from_columns(columns, n))
    return nets


def best_scrambled(net: DigitalNet, M: int, seed: int, q: int = 2, threads: int | None = None) -> DigitalNet:
    """Convenience: the minimum-WAFOM scrambling of ``net`` over M candidates."""
    return scramble_search(net, SearchConfig(M=M, seed=seed, q=q), threads=threads).best_net
