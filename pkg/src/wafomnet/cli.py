"""Command-line interface: ``wafomnet {points,quality,search,genz}``.

Single results are printed as JSON, sweeps are written as CSV.  Exit codes:
0 success, 2 usage or validation error, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import genz as genz_mod
from .net import NetFormatError, load_net, points_real, save_scramble
from .quality import quality_report, t_value, wafom, wafom_dual_oracle
from .search import SearchConfig, default_threads, naive_column_search, scramble_search, write_trace
from .sobol import build_sobol, load_direction_numbers

EPILOG_FORMATS = """\
formats:
  net file       line 1 "s n m"; then s blank-separated blocks of n rows of m bits
  scramble file  line 1 "s n"; then s blank-separated blocks of n rows of n bits
  trace          JSON lines {"index": i, "wafom": w}, one per improvement
  genz CSV       net,family,s,m,N,median_log10_rel_err,samples,seed
"""


class UsageError(Exception):
    pass


def _add_net_source(p: argparse.ArgumentParser, *, with_m=True):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--net", metavar="FILE", help="net file")
    src.add_argument("--sobol-dirs", metavar="FILE",
                     help="Sobol' direction-number file (Joe-Kuo format); 'builtin' for the bundled table")
    p.add_argument("--s", type=int, help="dimension (Sobol' source)")
    p.add_argument("--n", type=int, default=32, help="precision in bits (Sobol' source, default 32)")
    if with_m:
        p.add_argument("--m", type=int, required=True, help="log2 of the number of points")


def _threads(args) -> int:
    t = getattr(args, "threads", None)
    return default_threads() if t is None else t


def _validate_source(args):
    if args.sobol_dirs is not None and args.s is None:
        raise UsageError("--sobol-dirs needs --s")
    if args.net is not None and args.s is not None:
        raise UsageError("--s only applies to a Sobol' source")
    if getattr(args, "m", None) is not None and args.m < 0:
        raise UsageError("--m must be >= 0")
    if args.s is not None and args.s < 1:
        raise UsageError("--s must be >= 1")
    if not 1 <= args.n <= 64:
        raise UsageError("--n must be in 1..64")


def _direction_path(value):
    return None if value in (None, "builtin") else value


def _sobol_net(dirs, s, m, n):
    if m > n:
        raise UsageError(f"--m {m} exceeds --n {n}")
    return build_sobol(load_direction_numbers(_direction_path(dirs)), s, m, n)


def _load_source(args):
    if args.net is not None:
        net = load_net(args.net)
        if args.m > net.m:
            raise UsageError(f"--m {args.m} exceeds the file's m={net.m}")
        return net.truncate(args.m) if args.m < net.m else net
    return _sobol_net(args.sobol_dirs, args.s, args.m, args.n)


# subcommands -----------------------------------------------------------------

def cmd_points(args, out):
    _validate_source(args)
    if args.count is not None and args.count < 0:
        raise UsageError("--count must be >= 0")
    net = _load_source(args)
    X = points_real(net)
    if args.count is not None:
        X = X[: args.count]
    lines = "".join(" ".join(f"{v:.17g}" for v in row) + "\n" for row in X)
    _emit(lines, args.out, out)


def cmd_quality(args, out):
    _validate_source(args)
    net = _load_source(args)
    if args.verify_dual and net.s * net.n > 24:
        raise UsageError("--verify-dual needs s*n <= 24")
    rep = quality_report(net, args.q)
    if args.verify_dual:
        naive = wafom(net, args.q)
        dual = wafom_dual_oracle(net, args.q)
        for name, v in (("naive", naive), ("dual", dual)):
            if abs(v - rep.wafom) > 1e-12 * max(abs(v), abs(rep.wafom)):
                raise RuntimeError(f"WAFOM paths disagree: fast={rep.wafom!r} {name}={v!r}")
    _emit(json.dumps(rep.as_dict()) + "\n", None, out)


def cmd_search(args, out):
    _validate_source(args)
    if args.M < 1:
        raise UsageError("--M must be >= 1")
    net = _load_source(args)
    if net.m > net.n:
        raise UsageError("search needs m <= n")
    cfg = SearchConfig(M=args.M, seed=args.seed, q=args.q,
                       include_identity=args.include_identity, objective=args.objective)
    res = scramble_search(net, cfg, threads=_threads(args))
    if args.out_scramble:
        save_scramble(res.best_scramble, args.out_scramble)
    if args.out_trace:
        write_trace(res, args.out_trace)
    summary = {
        "s": net.s, "m": net.m, "n": net.n, "q": cfg.q, "M": cfg.M, "seed": cfg.seed,
        "objective": cfg.objective, "include_identity": cfg.include_identity,
        "t": t_value(net),
        "unscrambled_wafom": wafom(net, cfg.q),
        "best_wafom": res.best_wafom,
        "candidate_index": res.candidate_index,
        "improvements": len(res.trace),
    }
    _emit(json.dumps(summary) + "\n", None, out)


def _parse_m_range(text):
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad --m-range {text!r}; use LO:HI") from None
    if lo < 0 or hi < lo:
        raise UsageError(f"bad --m-range {text!r}")
    return list(range(lo, hi + 1))


def _parse_families(text):
    try:
        fams = sorted({int(v) for v in text.split(",")})
    except ValueError:
        raise UsageError(f"bad --families {text!r}") from None
    if not fams or any(f not in genz_mod.DEFAULT_H for f in fams):
        raise UsageError("--families must list values in 1..6")
    return fams


def _parse_net_specs(items):
    specs = []
    for item in items:
        label, sep, spec = item.partition("=")
        if not sep or not label:
            raise UsageError(f"--nets entries are LABEL=SPEC, got {item!r}")
        kind, _, arg = spec.partition(":")
        if kind == "sobol" and not arg:
            specs.append((label, kind, None))
        elif kind in ("scrambled", "worst", "naive"):
            try:
                specs.append((label, kind, int(arg)))
            except ValueError:
                raise UsageError(f"{kind} needs an integer, got {spec!r}") from None
        elif kind == "file" and arg:
            specs.append((label, kind, arg))
        else:
            raise UsageError(f"unknown net spec {spec!r}")
    if len({lbl for lbl, _, _ in specs}) != len(specs):
        raise UsageError("duplicate net labels")
    return specs


def _build_family(kind, arg, s, n, ms, dirs, seed, threads):
    if kind == "file":
        base = load_net(arg)
        if base.s != s:
            raise UsageError(f"{arg}: s={base.s}, expected {s}")
        if max(ms) > base.m:
            raise UsageError(f"{arg}: m={base.m} is below the requested range")
        return {m: base.truncate(m) for m in ms}
    if kind == "naive":
        nets = naive_column_search(s, n, max(ms), arg, seed)
        return {m: nets[m - 1] for m in ms}
    entries = load_direction_numbers(_direction_path(dirs))
    out = {}
    for m in ms:
        base = build_sobol(entries, s, m, n)
        if kind == "sobol":
            out[m] = base
        else:
            objective = "minimize" if kind == "scrambled" else "maximize"
            cfg = SearchConfig(M=arg, seed=seed, objective=objective)
            out[m] = scramble_search(base, cfg, threads=threads).best_net
    return out


def cmd_genz(args, out):
    specs = _parse_net_specs(args.nets)
    fams = _parse_families(args.families)
    ms = _parse_m_range(args.m_range)
    if args.s < 1 or args.samples < 1:
        raise UsageError("--s and --samples must be >= 1")
    if not 1 <= args.n <= 64 or max(ms) > args.n:
        raise UsageError("need m <= n <= 64")
    if any(kind == "naive" for _, kind, _ in specs) and min(ms) < 1:
        raise UsageError("naive nets start at m = 1")
    nets = {label: _build_family(kind, arg, args.s, args.n, ms, args.sobol_dirs, args.seed, _threads(args))
            for label, kind, arg in specs}
    results = genz_mod.run_bench(nets, fams, args.s, args.samples, args.seed)
    _emit(genz_mod.format_csv(results), args.out, out)


def _emit(text, path, out):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wafomnet",
        description="Digital nets over GF(2): t-values, WAFOM, scrambling search, Genz benchmarks.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG_FORMATS,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("points", help="print the shifted points of a net, one per line")
    _add_net_source(p)
    p.add_argument("--count", type=int, help="only the first COUNT points")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("quality", help="print {t, wafom, q, s, m, n} as JSON")
    _add_net_source(p)
    p.add_argument("--q", type=int, choices=(2, 4), default=2)
    p.add_argument("--verify-dual", action="store_true",
                   help="cross-check against dual-space enumeration (s*n <= 24)")
    p.set_defaults(func=cmd_quality)

    p = sub.add_parser("search", help="random linear-scrambling search (default M=1000)")
    _add_net_source(p)
    p.add_argument("--M", type=int, default=1000, help="number of random candidates (default 1000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q", type=int, choices=(2, 4), default=2)
    p.add_argument("--objective", choices=("minimize", "maximize"), default="minimize")
    p.add_argument("--include-identity", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out-scramble", metavar="FILE")
    p.add_argument("--out-trace", metavar="FILE")
    p.add_argument("--threads", type=int, help="worker threads (env WAFOMNET_THREADS)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser(
        "genz", help="median log10 relative error on the Genz families, as CSV",
        description="Net specs: sobol | scrambled:M | worst:M | naive:K | file:PATH",
    )
    p.add_argument("--nets", nargs="+", required=True, metavar="LABEL=SPEC")
    p.add_argument("--families", default="1,2,3,4,5,6")
    p.add_argument("--s", type=int, default=5)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--m-range", default="1:16", help="inclusive LO:HI (default 1:16)")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sobol-dirs", metavar="FILE", default="builtin")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_genz)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("wafomnet: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        args.func(args, out)
    except (UsageError, NetFormatError, FileNotFoundError, ValueError) as exc:
        print(f"wafomnet: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"wafomnet: internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
