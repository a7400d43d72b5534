"""Command-line front end.

Every subcommand writes its tables to ``--out`` (or ``$NANOTUBE_SPECTRA_OUTDIR``,
or the working directory) as CSV or JSON and prints a short summary.

Exit codes: 0 success, 1 failed acceptance check, 2 invalid input,
3 numerical non-convergence, 4 cross-check mismatch.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .artifacts import Table, output_dir, write_artifact

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NOCONV, EXIT_MISMATCH = 0, 1, 2, 3, 4


class ValidationError(ValueError):
    pass


def _chiral(args):
    from .lattice import as_chiral

    if args.p is None or args.q is None:
        raise ValidationError("--p and --q are required")
    if args.p < 0 or args.q < 0:
        raise ValidationError("--p and --q must be non-negative")
    n = args.p + args.q
    if n < 3:
        raise ValidationError(f"p+q = {n} is below 3")
    if n < 5 and not args.allow_thin:
        raise ValidationError(f"p+q = {n} is below 5; pass --allow-thin for 3 <= p+q < 5")
    return as_chiral((args.p, args.q))


def _config(args, keys) -> dict:
    cfg = {"command": args.command}
    for k in keys:
        v = getattr(args, k)
        cfg[k] = list(v) if isinstance(v, (list, tuple)) else v
    return cfg


# ---------------------------------------------------------------- commands

def cmd_moments(args) -> tuple[list[Table], dict, int]:
    from .lattice import TRIANGULAR
    from .moments import METHODS, moment_table

    if args.kmax < 0:
        raise ValidationError("--kmax must be non-negative")
    if args.triangular:
        target = TRIANGULAR
        names = ["triangular_sum", "oracle"] if args.methods == "all" else args.methods.split(",")
    else:
        target = _chiral(args)
        names = list(METHODS) if args.methods == "all" else args.methods.split(",")
    unknown = [m for m in names if m not in METHODS + ("triangular_sum",)]
    if unknown:
        raise ValidationError(f"unknown method(s) {unknown}; choose from {', '.join(METHODS)}")
    seqs = [moment_table(target, args.kmax, [m])[0] for m in names]
    status, code = "agree", EXIT_OK
    for k in range(args.kmax + 1):
        vals = {s.method: s.values[k] for s in seqs}
        if len(set(vals.values())) > 1:
            status, code = f"mismatch at k={k}: {vals}", EXIT_MISMATCH
            break
    rows = [(k, s.method, s.values[k]) for s in seqs for k in range(args.kmax + 1)]
    table = Table("moments", ["k", "method", "value"], rows, {"crosscheck": status})
    cfg = _config(args, ["p", "q", "triangular", "kmax", "methods"])
    return [table], cfg, code


def cmd_sample(args) -> tuple[list[Table], dict, int]:
    from .sampler import SeededStream, histogram, sample_general, sample_triangular_limit

    if args.n <= 0:
        raise ValidationError("--n must be positive")
    if args.bins <= 0:
        raise ValidationError("--bins must be positive")
    st = SeededStream(args.seed)
    if args.limit is not None:
        if not 0.0 <= args.limit <= 1.0:
            raise ValidationError("--limit must lie in [0, 1]")
        x = sample_triangular_limit(args.limit, st, args.n)
    else:
        x = sample_general(_chiral(args), st, args.n)
    left, right, counts = histogram(x, args.bins)
    meta = {"stream": repr(st)}
    tables = [
        Table("samples", ["lambda"], [(float(v),) for v in x], meta),
        Table("histogram", ["bin_left", "bin_right", "count"],
              [(float(a), float(b), int(c)) for a, b, c in zip(left, right, counts)], meta),
    ]
    return tables, _config(args, ["p", "q", "limit", "n", "seed", "bins"]), EXIT_OK


def cmd_pdf(args) -> tuple[list[Table], dict, int]:
    from .density import build_density, cdf_grid

    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    ch = _chiral(args)
    d = build_density(ch)
    xs = np.linspace(0.0, 9.0, args.grid)
    f = np.atleast_1d(d.pdf(xs))
    F = cdf_grid(d, xs)
    masses = d.piece_masses()
    meta = {"kind": ch.kind, "total_mass": float(d.total_mass())}
    tables = [
        Table("pdf", ["x", "pdf", "cdf"], [(float(a), float(b), float(c)) for a, b, c in zip(xs, f, F)], meta),
        Table("atoms", ["x", "mass"], [(float(a.x), str(a.mass)) for a in d.atoms]),
        Table("pieces", ["lo", "hi", "mass"],
              sorted((float(pc.lo), float(pc.hi), float(m)) for pc, m in zip(d.pieces, masses))),
    ]
    return tables, _config(args, ["p", "q", "grid"]), EXIT_OK


def cmd_mgf(args) -> tuple[list[Table], dict, int]:
    from .mgf import mgf, mgf_limit

    ts = [float(t) for t in args.t]
    if not all(math.isfinite(t) for t in ts):
        raise ValidationError("--t values must be finite")
    if args.triangular:
        rows = [(t, *_pair(mgf_limit(t))) for t in ts]
        cfg = _config(args, ["triangular", "t"])
    else:
        ch = _chiral(args)
        rows = [(t, *_pair(mgf(ch, t))) for t in ts]
        cfg = _config(args, ["p", "q", "t"])
    return [Table("mgf", ["t", "m", "err"], rows)], cfg, EXIT_OK


def _pair(res):
    return float(res.value), float(res.error_estimate)


def cmd_lattice(args) -> tuple[list[Table], dict, int]:
    from .lattice import build_finite_armchair55_dual, half_loop_matrix, normalized_trace_moments
    from .moments import moments_oracle
    from .numerics import symmetric_eigenvalues

    if args.rings < 0:
        raise ValidationError("--rings must be non-negative")
    if args.kmax < 0:
        raise ValidationError("--kmax must be non-negative")
    g = build_finite_armchair55_dual(args.rings)
    m = half_loop_matrix(g)
    tr = normalized_trace_moments(m, args.kmax)
    sp = symmetric_eigenvalues(np.array([[float(x) for x in row] for row in m]), tol=1e-14)
    meta = {"vertices": g.n, "edges": g.edge_count,
            "degrees": {str(k): v for k, v in g.degree_histogram().items()}}
    edges = Table("edges", ["u", "v"], g.edges(), meta)
    loops = Table("loops", ["v", "weight"], [(v, str(Fraction(w))) for v, w in enumerate(g.loop_weights)])
    spectrum = Table("spectrum", ["index", "eigenvalue"], [(i, float(e)) for i, e in enumerate(sp.eigenvalues)],
                 {"residual": sp.residual, "sweeps": sp.sweeps})
    rows = []
    for k, t in enumerate(tr):
        mu = moments_oracle((5, 5), k)
        rows.append((k, str(t), float(t), float(np.mean(sp.eigenvalues ** k)), mu, float(abs(t - mu) / mu)))
    traces = Table("traces", ["k", "trace_exact", "trace", "trace_eigen", "mu_infinite", "rel_error"], rows)
    return [edges, loops, spectrum, traces], _config(args, ["rings", "kmax"]), EXIT_OK


def cmd_verify(args) -> tuple[list[Table], dict, int]:
    from .verification import run_suite

    results = run_suite(args.suite, args.seed)
    for r in results:
        print(r.line())
        if args.verbose or not r.passed:
            for d in r.details:
                print("    " + d)
    # timings stay on stdout so that the file is reproducible
    rows = [(r.number, r.title, r.passed, "; ".join(d for d in r.details if "runtime" not in d))
            for r in results]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    return [Table("verify", ["criterion", "title", "passed", "details"], rows)], \
        _config(args, ["suite", "seed"]), code


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nanotube-spectra",
                                 description="Random eigenvalues of dual infinite (p,q)-nanotubes.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, chiral=True):
        if chiral:
            sp.add_argument("--p", type=int, help="first chiral index")
            sp.add_argument("--q", type=int, help="second chiral index")
            sp.add_argument("--allow-thin", action="store_true",
                            help="accept circumferences 3 <= p+q < 5")
        sp.add_argument("--out", help="output directory (default $NANOTUBE_SPECTRA_OUTDIR or cwd)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("moments", help="exact moments by every formula, cross-checked")
    common(sp)
    sp.add_argument("--kmax", type=int, default=12)
    sp.add_argument("--methods", default="all", help="'all' or a comma-separated list")
    sp.add_argument("--triangular", action="store_true", help="moments of the triangular lattice")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("sample", help="Monte Carlo samples and histogram")
    common(sp)
    sp.add_argument("--n", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--bins", type=int, default=90)
    sp.add_argument("--limit", type=float, default=None, metavar="C",
                    help="sample the triangular limit law with share C instead")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("pdf", help="density and CDF on a grid, atoms and pieces")
    common(sp)
    sp.add_argument("--grid", type=int, default=901)
    sp.set_defaults(func=cmd_pdf)

    sp = sub.add_parser("mgf", help="moment generating function")
    common(sp)
    sp.add_argument("--t", type=float, nargs="+", default=[-0.5, -0.1, 0.1, 0.5])
    sp.add_argument("--triangular", action="store_true", help="limit MGF of the triangular lattice")
    sp.set_defaults(func=cmd_mgf)

    sp = sub.add_parser("lattice", help="finite (5,5) dual: edges, spectrum, trace moments")
    common(sp, chiral=False)
    sp.add_argument("--rings", type=int, default=0)
    sp.add_argument("--kmax", type=int, default=6)
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    common(sp, chiral=False)
    sp.add_argument("--suite", choices=("quick", "full"), default="quick")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    from .moments import MomentMismatch
    from .numerics import ExtremumDetectionFailure, NoConvergence

    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.seed is None:
        from .verification import DEFAULT_SEED

        args.seed = DEFAULT_SEED
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_INVALID
    try:
        tables, cfg, code = args.func(args)
    except (ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (NoConvergence, ExtremumDetectionFailure) as e:
        print(f"error: numerical non-convergence: {e}", file=sys.stderr)
        return EXIT_NOCONV
    except MomentMismatch as e:
        print(f"error: cross-check mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    out = output_dir(args.out)
    for t in tables:
        path = write_artifact(t, cfg, out, args.format)
        print(f"wrote {path}")
    if code == EXIT_MISMATCH:
        print(f"error: cross-check {tables[0].meta.get('crosscheck')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
