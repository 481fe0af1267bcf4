"""Command line front end.

Grid arguments are always given in kernel units (mean spacing pi);
``--units unit-mean`` rescales the coordinates and densities written out.
Exit status is 0 on success, 1 on a numerical or data failure, 2 on a usage error.
"""
import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import _io, densities, mc, nystrom, tw, zeta
from ._parallel import resolve_workers
from .errors import InvalidArgumentError, JanossyError
from .nystrom import A_MAX_LIMIT

TOL_RANGE = (1e-14, 1e-6)


class UsageError(Exception):
    pass


def parse_range(text):
    """``lo:hi:n`` -> n equally spaced points (n = 1 requires lo == hi)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo or (n == 1 and hi != lo):
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return np.linspace(lo, hi, n)


def parse_window(text):
    """``start:count`` with a 1-based start index."""
    try:
        start, count = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:count, got {text!r}") from None
    if start < 1 or count < 3:
        raise argparse.ArgumentTypeError(f"bad window {text!r}")
    return start, count


def _tol(text):
    v = float(text)
    if not TOL_RANGE[0] <= v <= TOL_RANGE[1]:
        raise argparse.ArgumentTypeError(f"tolerance must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    return v


def _a_max(text):
    v = float(text)
    if not 0 < v <= A_MAX_LIMIT:
        raise argparse.ArgumentTypeError(f"a_max must lie in (0, {A_MAX_LIMIT:g}]")
    return v


def _threads(text):
    if text.strip().lower() == "auto":
        return "auto"
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("threads must be a positive integer or 'auto'")
    return v


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "output", "threads", "hist", "fit_output",
                                                              "outdir")}
    for k, v in cfg.items():
        if isinstance(v, np.ndarray):
            cfg[k] = [float(v[0]), float(v[-1]), int(v.size)]
    return cfg


def _emit(args, columns, rows, meta=None, path=None):
    text = _io.render(columns, rows, _config(args), getattr(args, "seed", None), meta, args.format)
    _io.write(path if path is not None else args.output, text)


def _unit_factor(args):
    return 1.0 / math.pi if args.units == "unit-mean" else 1.0


# cache ---------------------------------------------------------------------------

def _cache_dir(args):
    d = getattr(args, "cache_dir", None) or os.environ.get("JANOSSY_CACHE_DIR")
    return Path(d) if d else None


def cached_ratio_moments(args, k_max, order=100):
    """Exact r~ moments, memoised on disk when a cache directory is configured."""
    key = {"k_max": k_max, "order": order, "a_max": args.a_max, "tol": args.tol, "version": _io.__version__}
    d = _cache_dir(args)
    f = None
    if d is not None:
        h = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
        f = d / f"moments-{h}.json"
        if f.exists():
            doc = json.loads(f.read_text())
            return densities.MomentSet(k_max, np.array(doc["values"]), np.array(doc["est_error"]),
                                       meta=doc["meta"])
    ms = densities.ratio_moments(k_max, order=order, a_max=args.a_max, tol=args.tol, workers=args.threads)
    if f is not None:
        d.mkdir(parents=True, exist_ok=True)
        f.write_text(json.dumps({"values": ms.values.tolist(), "est_error": ms.est_error.tolist(),
                                 "meta": ms.meta}))
    return ms


# subcommands ---------------------------------------------------------------------

def janossy_grid(a1s, a2s, tol, cross_check=False, m=nystrom.DEFAULT_ORDER, workers=None):
    """Rows ``(a1, a2, lnJ, J, method)`` over the product grid, TW first, and
    the largest relative TW/Nystrom deviation (nan without cross check)."""
    from ._parallel import pmap
    pts = [(float(a1), float(a2)) for a1 in a1s for a2 in a2s]
    for a1, a2 in pts:
        nystrom.Interval(a1, a2)
    lt = pmap(lambda p: tw.log_janossy(p[0], p[1], tol=tol), pts, workers)
    rows = [(a1, a2, l, math.exp(l), "tw") for (a1, a2), l in zip(pts, lt)]
    worst = math.nan
    if cross_check:
        ln = pmap(lambda p: nystrom.fredholm_logdet(nystrom.Interval(*p), m), pts, workers)
        rows += [(a1, a2, l, math.exp(l), "nystrom") for (a1, a2), l in zip(pts, ln)]
        worst = max(abs(math.expm1(b - a)) for a, b in zip(lt, ln))
    return rows, worst


def cmd_janossy(args):
    rows, worst = janossy_grid(args.a1, args.a2, args.tol, args.cross_check, args.m, args.threads)
    f = _unit_factor(args)
    rows = [(a1 * f, a2 * f, l, j, meth) for a1, a2, l, j, meth in rows]
    meta = {"units": args.units}
    if args.cross_check:
        meta["max_rel_dev"] = worst
        print(f"max |dJ/J| = {worst:.3e}", file=sys.stderr)
    _emit(args, ("a1", "a2", "lnJ", "J", "method"), rows, meta)
    return 0


def _density_table(args):
    kind = args.kind
    if kind == "joint":
        if args.a1 is None or args.a2 is None:
            raise UsageError("joint densities need --a1 and --a2")
        pts, shape = densities.joint_grid(args.a1, args.a2)
        return densities.joint_density(pts, tol=args.tol, workers=args.threads, shape=shape)
    if args.grid is None:
        raise UsageError(f"{kind} densities need --grid")
    g = args.grid
    if kind == "spacing":
        return densities.spacing_density(g, tol=args.tol)
    if kind == "nearest_neighbor":
        return densities.nearest_neighbor_density(g, tol=args.tol)
    if kind == "ratio":
        return densities.ratio_density(g, a_max=args.a_max, tol=args.tol, workers=args.threads)
    return densities.ratio_tilde_density(g, a_max=args.a_max, tol=args.tol, workers=args.threads)


def cmd_densities(args):
    table = _density_table(args).to_units(args.units)
    meta = {"kind": table.kind, "units": table.units}
    if table.kind != "joint" or "shape" in table.meta:
        meta["trapezoid_normalization"] = table.normalization()
    if table.kind == "joint":
        rows = [(a1, a2, v) for (a1, a2), v in zip(table.grid, table.values)]
        _emit(args, ("a1", "a2", "density"), rows, meta)
    else:
        _emit(args, ("x", "density"), list(zip(table.grid, table.values)), meta)
    return 0


def cmd_moments(args):
    ms = cached_ratio_moments(args, args.kmax, args.order)
    rows = [(k, ms[k], ms.est_error[k - 1]) for k in range(1, ms.k_max + 1)]
    _emit(args, ("k", "moment", "est_error"), rows, {"normalization": ms.meta["normalization"]})
    return 0


def cmd_surmise(args):
    exact = cached_ratio_moments(args, args.kmax)
    rows = densities.surmise_gap(exact, args.beta, args.kmax)
    _emit(args, ("k", "exact", "surmise", "gap"), rows,
          {"beta": args.beta, "C_beta": densities.surmise_constant(args.beta)})
    return 0


def cmd_mc(args):
    ms, hist = mc.empirical_ratio_stats(args.n, args.dim, args.bulk, args.seed, n_bins=args.bins,
                                        workers=args.threads)
    probs = densities.ratio_bin_probabilities(hist.meta["edges"], a_max=args.a_max, tol=args.tol,
                                              workers=args.threads)
    chi2, nb = mc.histogram_chi2(hist, probs)
    meta = {"n_ratios": ms.meta["n_samples"], "chi2": chi2, "chi2_per_bin": chi2 / nb}
    rows = [(k, ms[k], ms.est_error[k - 1]) for k in range(1, ms.k_max + 1)]
    _emit(args, ("k", "moment", "std_err"), rows, meta)
    if args.hist:
        counts = hist.meta["counts"]
        total = counts.sum()
        edges = hist.meta["edges"]
        hrows = [(edges[i], edges[i + 1], int(counts[i]), hist.values[i], total * probs[i])
                 for i in range(counts.size)]
        _emit(args, ("bin_lo", "bin_hi", "count", "density", "expected"), hrows, meta, path=args.hist)
    return 0


def _zeta_jobs(args):
    windows = list(args.window or [])
    for N in args.near_index or []:
        skip, take = zeta.index_window(N)
        windows.append((skip + 1, take))
    if not windows:
        raise UsageError("give at least one --window or --near-index")
    jobs = []
    for path in args.file:
        for start, count in windows:
            skip = start - args.first_index
            if skip < 0:
                raise UsageError(f"window start {start} precedes the first index {args.first_index} of {path}")
            jobs.append((path, skip, count, start, f"{Path(path).name}:{start}:{count}"))
    return jobs


def cmd_zeta(args):
    from ._parallel import pmap
    jobs = _zeta_jobs(args)
    stats = pmap(lambda j: zeta.stream_window_stats(j[0], j[1], j[2], n_bins=args.bins, start_index=j[3],
                                                    label=j[4]), jobs, args.threads)
    rows = [r for s in stats for r in s.rows()]
    _emit(args, zeta.WINDOW_COLUMNS, rows, {"n_ratios": [s.n_ratios for s in stats]})
    if len(stats) >= 2 and (args.fit_output or args.output not in (None, "-")):
        exact = cached_ratio_moments(args, zeta.K_MAX)
        fits = zeta.scaling_fit(stats, exact)
        path = args.fit_output
        if path is None:
            p = Path(args.output)
            path = str(p.with_name(p.stem + "_fit" + p.suffix))
        _emit(args, zeta.FIT_COLUMNS, zeta.fit_rows(fits), {"exact_moments": exact.values}, path=path)
    return 0


def cmd_zeta_convert(args):
    first, count = zeta.convert_indexed(args.src, args.dst)
    print(f"{count} ordinates starting at index {first}", file=sys.stderr)
    return 0


def cmd_repro(args):
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    ext = "." + args.format
    grid = np.linspace(-3 * math.pi, 0.0, 31), np.linspace(0.0, 3 * math.pi, 31)

    rows, worst = janossy_grid(grid[0], grid[1], args.tol, True, nystrom.DEFAULT_ORDER, args.threads)
    f = _unit_factor(args)
    rows = [(a1 * f, a2 * f, l, j, m) for a1, a2, l, j, m in rows]
    _emit(args, ("a1", "a2", "lnJ", "J", "method"), rows, {"max_rel_dev": worst, "units": args.units},
          path=out / ("fig1_janossy" + ext))

    pts, shape = densities.joint_grid(grid[0], grid[1])
    jt = densities.joint_density(pts, tol=args.tol, workers=args.threads, shape=shape).to_units(args.units)
    _emit(args, ("a1", "a2", "density"), [(a, b, v) for (a, b), v in zip(jt.grid, jt.values)],
          {"units": jt.units}, path=out / ("fig1_joint" + ext))

    rt = np.linspace(0.0, 1.0, 101)[1:]
    dens = densities.ratio_tilde_density(rt, a_max=args.a_max, tol=args.tol, workers=args.threads)
    sm = 2.0 * densities.surmise_ratio(rt, 2)
    _emit(args, ("r_tilde", "density", "surmise"), list(zip(rt, dens.values, sm)), {},
          path=out / ("fig2_ratio_tilde" + ext))

    ms = cached_ratio_moments(args, 4)
    _emit(args, ("k", "moment", "est_error", "surmise"),
          [(k, ms[k], ms.est_error[k - 1], densities.surmise_tilde_moment(k, 2)) for k in range(1, 5)],
          {"normalization": ms.meta["normalization"]}, path=out / ("moments" + ext))
    print(f"wrote 4 files to {out} (max |dJ/J| = {worst:.3e})", file=sys.stderr)
    return 0


# parser --------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_tol, default=tw.DEFAULT_TOL, help="ODE tolerance")
    common.add_argument("--a-max", type=_a_max, default=densities.DEFAULT_A_MAX,
                        help="cutoff of the a-integrals in kernel units")
    common.add_argument("--units", choices=("kernel", "unit-mean"), default="kernel")
    common.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_threads, default=None,
                        help="worker threads or 'auto' (default $JANOSSY_THREADS or 1)")
    common.add_argument("--cache-dir", default=None, help="cache for exact moments (default $JANOSSY_CACHE_DIR)")

    p = argparse.ArgumentParser(prog="janossy", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("janossy", parents=[common], help="J_1(0; [a1, a2]) on a grid")
    s.add_argument("--a1", type=parse_range, required=True, metavar="LO:HI:N")
    s.add_argument("--a2", type=parse_range, required=True, metavar="LO:HI:N")
    s.add_argument("--cross-check", action="store_true", help="also evaluate the Nystrom determinant")
    s.add_argument("--m", type=int, default=nystrom.DEFAULT_ORDER, help="Nystrom quadrature order")
    s.set_defaults(func=cmd_janossy)

    s = sub.add_parser("densities", parents=[common], help="spacing, joint and ratio densities")
    s.add_argument("kind", choices=densities.KINDS)
    s.add_argument("--grid", type=parse_range, metavar="LO:HI:N", help="abscissae for 1-D kinds")
    s.add_argument("--a1", type=parse_range, metavar="LO:HI:N")
    s.add_argument("--a2", type=parse_range, metavar="LO:HI:N")
    s.set_defaults(func=cmd_densities)

    s = sub.add_parser("moments", parents=[common], help="exact moments of r~")
    s.add_argument("--kmax", type=int, default=4)
    s.add_argument("--order", type=int, default=100)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("surmise", parents=[common], help="surmise moments against exact ones")
    s.add_argument("--beta", type=int, choices=(1, 2, 4), default=2)
    s.add_argument("--kmax", type=int, default=4)
    s.set_defaults(func=cmd_surmise)

    s = sub.add_parser("mc", parents=[common], help="Monte Carlo GUE ratio statistics")
    s.add_argument("--n", type=int, default=2000, help="number of matrices")
    s.add_argument("--dim", type=int, default=1000, help="matrix dimension")
    s.add_argument("--bulk", type=float, default=0.1, help="central fraction of levels pooled")
    s.add_argument("--bins", type=int, default=50)
    s.add_argument("--hist", default=None, help="also write the histogram here")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("zeta", parents=[common], help="ratio moments of zeta zeros")
    s.add_argument("--file", action="append", required=True, help="zero table (repeatable)")
    s.add_argument("--window", type=parse_window, action="append", metavar="START:COUNT")
    s.add_argument("--near-index", type=int, action="append", metavar="N",
                   help="window of zeros N .. 1.001N+1 (repeatable)")
    s.add_argument("--first-index", type=int, default=1, help="index of the first zero in each file")
    s.add_argument("--bins", type=int, default=zeta.DEFAULT_BINS)
    s.add_argument("--fit-output", default=None)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("zeta-convert", help="turn an 'index ordinate' table into one ordinate per line")
    s.add_argument("src")
    s.add_argument("dst")
    s.set_defaults(func=cmd_zeta_convert)

    s = sub.add_parser("repro", parents=[common], help="regenerate the figure grids and the moment table")
    s.add_argument("--outdir", default="repro")
    s.set_defaults(func=cmd_repro)
    return p


_RANGE_FLAGS = ("--a1", "--a2", "--grid")


def _join_ranges(argv):
    # "--a1 -10:0:21" would otherwise read the negative range as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    if hasattr(args, "threads"):
        try:
            args.threads = resolve_workers(args.threads)
        except ValueError as exc:
            parser.error(f"bad thread count: {exc}")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (InvalidArgumentError, FileNotFoundError) as exc:
        print(f"janossy: error: {exc}", file=sys.stderr)
        return 2
    except (JanossyError, ArithmeticError, OSError) as exc:
        print(f"janossy: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
