"""``perron-eig`` command-line front end.

Every subcommand reads a dense matrix (Matrix Market array or CSV), runs one
stage of the pipeline and writes a JSON report (``trace`` writes CSV).
Exit status: 0 success, 1 domain error, 2 I/O or parse error.
"""
import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _backend
from .cyclic import DEFAULT_CAPITAL_N, DEFAULT_EPSILON, DEFAULT_N_GRID, detect_cyclic_order
from .eigenspace import RANK_TOL, compute_basis
from .errors import ParseError, PerronEigError, UnsupportedFormatError
from .iteration import default_gamma, run_iteration
from .matio import FIXTURES, fixture_path, format_matrix_market, parse_matrix
from .oracle import oracle_report
from .refine import (
    DEFAULT_DT,
    DEFAULT_GAMMA,
    DEFAULT_T_END,
    combined_method,
    gradient_flow,
    stability_ratio,
)

SCHEMA = "perron-eig/1"
EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class IOFailure(Exception):
    pass


def _clean(obj):
    # json cannot carry inf/nan; numpy scalars are not serializable
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _load(path):
    if path is None:
        return None
    if path.startswith("fixture:"):
        path = str(fixture_path(path.split(":", 1)[1]))
    try:
        return parse_matrix(path)
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (ParseError, UnsupportedFormatError) as exc:
        raise IOFailure(f"{path}: {exc}") from exc


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _gamma(raw, a):
    if raw == "auto":
        return default_gamma(a)
    g = float(raw)
    if not g > 0:
        raise ValueError("--gamma must be positive")
    return g


def _grid(raw):
    if ".." in raw:
        lo, hi = raw.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in raw.split(",") if t.strip()]


def _warn_stiff(a, x, nu, s0, gamma, n, dt):
    ratio = stability_ratio(a, x, nu, s0, gamma, n, dt)
    if ratio > 2.0:
        print(
            f"warning: step stability ratio {ratio:.3g} > 2; the RK4 flow may oscillate, "
            "reduce --dt or --gamma",
            file=sys.stderr,
        )


def cmd_estimate(args, a, v):
    est = run_iteration(a, v, args.n, _gamma(args.gamma, a))
    return {"spectral_estimate": est.to_dict()}


def cmd_cyclic_order(args, a, v):
    rep = detect_cyclic_order(a, args.N, _grid(args.grid), args.eps)
    if not rep.determined:
        print(f"note: no stable dichotomy at N = {args.N}; try a larger --N", file=sys.stderr)
    return {"cyclic_order": rep.to_dict()}


def _refine(args, a):
    if args.s0 is None:
        res = combined_method(
            a, args.N, args.n, args.gamma_flow, args.t_end, args.dt,
            n_grid=_grid(args.grid), epsilon=args.eps, nu=args.nu,
        )
    else:
        if args.nu is None:
            raise ValueError("--s0 needs --nu as well")
        est = run_iteration(a, None, args.N, 1.0)
        j = int(np.argmax(np.linalg.norm(est.w_n, axis=0))) + 1
        x = run_iteration(a, None, args.n, 1.0).w_n[:, j - 1]
        res = gradient_flow(a, x, args.nu, args.s0, args.gamma_flow, args.n, args.t_end, args.dt)
        res.j, res.capital_n = j, args.N
    x = run_iteration(a, None, args.n, 1.0).w_n[:, res.j - 1]
    _warn_stiff(a, x, res.nu, res.s0, res.gamma, res.n, res.dt)
    return res


def cmd_refine(args, a, v):
    return {"refinement": _refine(args, a).to_dict()}


def cmd_eigenspace(args, a, v):
    out = {}
    s_bar, nu = args.s_bar, args.nu
    if s_bar is None:
        res = _refine(args, a)
        s_bar, nu = res.s_refined, res.nu
        out["refinement"] = res.to_dict()
    elif nu is None:
        raise ValueError("--s-bar needs --nu as well")
    basis = compute_basis(a, s_bar, nu, args.n_basis, v, rank_tol=args.rank_tol)
    out["eigenspace"] = basis.to_dict()
    if args.basis_out:
        _write(args.basis_out, format_matrix_market(basis.basis, "normalized basis columns"))
        out["eigenspace"]["basis_path"] = args.basis_out
    return out


def cmd_oracle(args, a, v):
    return {"oracle": oracle_report(a).to_dict()}


def cmd_trace(args, a, v):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.kind == "rayleigh":
        est = run_iteration(a, v, args.n, _gamma(args.gamma, a))
        w.writerow(["k", "rayleigh"])
        for k, val in est.rayleigh_trace:
            w.writerow([k, repr(val)])
    else:
        res = _refine(args, a)
        w.writerow(["t", "tau"])
        for t, tau in res.trajectory:
            w.writerow([repr(t), repr(tau)])
    return buf.getvalue()


def _add_matrix(p, init=True):
    p.add_argument("--matrix", "-m", required=True,
                   help="matrix file (Matrix Market array or CSV), or fixture:NAME")
    if init:
        p.add_argument("--init", help="initial matrix V (default: identity)")
    p.add_argument("--out", "-o", default="-", help="output file (default: stdout)")


def _add_flow(p, n_default=20):
    p.add_argument("--N", type=int, default=DEFAULT_CAPITAL_N, help="deep iteration depth")
    p.add_argument("--n", type=int, default=n_default, help="shallow iteration depth")
    p.add_argument("--eps", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--grid", default=f"{DEFAULT_N_GRID[0]}..{DEFAULT_N_GRID[-1]}",
                   help="probe depths, 'a..b' or comma list")
    p.add_argument("--nu", type=int, help="cyclic order (skips detection)")
    p.add_argument("--s0", type=float, help="starting value (default: s_N)")
    p.add_argument("--gamma-flow", type=float, default=DEFAULT_GAMMA, dest="gamma_flow")
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--t-end", type=float, default=DEFAULT_T_END, dest="t_end")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="perron-eig",
        description="Principal eigenvalue and generalized eigenspace of Perron-like matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--fixtures", action="store_true",
                        help="list bundled example matrices and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("estimate", help="normalized iteration W_n and s_n")
    _add_matrix(p)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--gamma", default="1.0", help="scale parameter or 'auto'")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("cyclic-order", help="beta dichotomy test for the cyclic order")
    _add_matrix(p, init=False)
    p.add_argument("--N", type=int, default=DEFAULT_CAPITAL_N)
    p.add_argument("--eps", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--grid", default=f"{DEFAULT_N_GRID[0]}..{DEFAULT_N_GRID[-1]}")
    p.set_defaults(func=cmd_cyclic_order)

    p = sub.add_parser("refine", help="combined method: s_N, nu, gradient flow")
    _add_matrix(p, init=False)
    _add_flow(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("eigenspace", help="basis of the principal generalized eigenspace")
    _add_matrix(p)
    _add_flow(p)
    p.add_argument("--s-bar", type=float, dest="s_bar",
                   help="eigenvalue estimate (default: run the combined method)")
    p.add_argument("--n-basis", type=int, default=20, dest="n_basis")
    p.add_argument("--rank-tol", type=float, default=RANK_TOL, dest="rank_tol")
    p.add_argument("--basis-out", dest="basis_out", help="write the basis as Matrix Market")
    p.set_defaults(func=cmd_eigenspace)

    p = sub.add_parser("oracle", help="brute-force reference spectrum")
    _add_matrix(p, init=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("trace", help="CSV series for plotting")
    _add_matrix(p)
    _add_flow(p)
    p.add_argument("--kind", choices=("flow", "rayleigh"), default="flow",
                   help="flow: (t, tau); rayleigh: (k, s at step k)")
    p.add_argument("--gamma", default="1.0", help="scale parameter for --kind rayleigh")
    p.set_defaults(func=cmd_trace)
    return parser


def _echo(args):
    skip = {"func", "fixtures"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.fixtures:
        for name in FIXTURES:
            print(f"fixture:{name}")
        return EXIT_OK
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_IO
    t0 = time.perf_counter()
    try:
        a = _load(args.matrix)
        v = _load(getattr(args, "init", None))
        result = args.func(args, a, v)
        if isinstance(result, str):
            _write(args.out, result)
            return EXIT_OK
        report = {
            "schema": SCHEMA,
            "command": args.command,
            "backend": _backend.name,
            "inputs": _echo(args),
            **result,
            "wall_time_s": time.perf_counter() - t0,
        }
        _write(args.out, json.dumps(_clean(report), indent=1) + "\n")
    except IOFailure as exc:
        print(f"perron-eig: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PerronEigError, ValueError, ArithmeticError) as exc:
        print(f"perron-eig: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
