"""Command-line front end: spectrum, trace, hf and regularity subcommands.

Exit codes: 0 success, 2 bad input (parse or validation), 3 a method
precondition does not hold, 4 no eigenpair found or the input is not one.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .continuation import (certified_values, critical_points_json, curve_report,
                           default_alpha_grid, find_critical_points, linear_alpha_grid, trace)
from .direct import NewtonFailure, multistart_spectrum, newton_solve
from .graph import GraphError, load_graph, normalize
from .operator import HessianUnavailable, residual
from .perturbation import REGULARITY_TOL, hf_eigenvalue_derivative, regularity
from .surgery import CutError, build_cut_operator
from .tree import NotATreeError, tree_spectrum

EXIT_INPUT, EXIT_PRECONDITION, EXIT_NO_EIGENPAIR = 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path):
    try:
        with open(path, "rb") as fh:
            return load_graph(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}")
    except GraphError as exc:
        raise CliError(EXIT_INPUT, str(exc))


def _need_cut(cut, one=False):
    if cut is None or len(cut) == 0:
        raise CliError(EXIT_PRECONDITION, "graph file has no cut")
    if one and len(cut) != 1:
        raise CliError(EXIT_PRECONDITION, "exactly one cut edge is supported")


def _alpha(text, cut):
    try:
        alpha = np.array([float(x) for x in str(text).split(",")])
    except ValueError:
        raise CliError(EXIT_INPUT, f"bad --alpha {text!r}")
    if np.any(alpha == 0):
        raise CliError(EXIT_INPUT, "alpha = 0 is not admissible")
    if alpha.size != len(cut):
        raise CliError(EXIT_INPUT, f"expected {len(cut)} alpha values")
    return alpha


def _floats(x):
    # + 0.0 turns -0.0 into 0.0
    return [float(v) + 0.0 for v in x]


def _pair_json(ep):
    return {"lambda": ep.lam + 0.0, "f": _floats(ep.f), "residual": ep.residual}


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _lambda_range(args):
    if args.lambda_min is None and args.lambda_max is None:
        return None
    if args.lambda_min is None or args.lambda_max is None:
        raise CliError(EXIT_INPUT, "give both --lambda-min and --lambda-max")
    if not args.lambda_max > args.lambda_min:
        raise CliError(EXIT_INPUT, "empty lambda range")
    return (args.lambda_min, args.lambda_max)


def cmd_spectrum(args):
    g, cut = _load(args.graph)
    if args.alpha is not None:
        _need_cut(cut)
        g = build_cut_operator(g, cut, _alpha(args.alpha, cut))
    if args.method == "tree":
        if not g.is_tree():
            raise CliError(EXIT_PRECONDITION, "graph is not a tree; cut it with --alpha "
                                              "or use --method newton")
        pairs = tree_spectrum(g, _lambda_range(args), args.grid)
    else:
        if g.p < 2:
            raise CliError(EXIT_PRECONDITION, "Newton needs p >= 2")
        pairs = multistart_spectrum(g, args.seeds, args.rng_seed)
        rng = _lambda_range(args)
        if rng is not None:
            pairs = [e for e in pairs if rng[0] <= e.lam <= rng[1]]
    _emit([_pair_json(e) for e in pairs])


def cmd_trace(args):
    g, cut = _load(args.graph)
    _need_cut(cut, one=True)
    if args.alpha_min is None and args.alpha_max is None:
        grid = default_alpha_grid()
    else:
        lo = -3.0 if args.alpha_min is None else args.alpha_min
        hi = 3.0 if args.alpha_max is None else args.alpha_max
        if not hi > lo:
            raise CliError(EXIT_INPUT, "empty alpha range")
        grid = linear_alpha_grid(lo, hi, args.points)
    try:
        curves = trace(g, cut, grid, _lambda_range(args), args.grid)
    except NotATreeError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc))
    cps = find_critical_points(curves, g, cut)
    try:
        curve_report(curves, cps, g, args.out_csv, args.out_json)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write output: {exc}")
    if args.out_json is None:
        sys.stdout.write(critical_points_json(cps, g) + "\n")
    print(f"{'lambda':>20} {'alpha':>20}  regular  sigma", file=sys.stderr)
    for cp in sorted((c for c in cps if c.certified), key=lambda c: (c.lam, c.alpha)):
        signs = " ".join(f"{g.vertices[a]}{g.vertices[b]}:{int(s):+d}"
                         for (a, b), s in zip(g.edges, cp.sigma))
        print(f"{cp.lam:20.12g} {cp.alpha:20.12g}  {str(cp.regularity.is_regular):7}  {signs}",
              file=sys.stderr)
    print(f"certified values: {', '.join(f'{v:.10g}' for v in certified_values(cps))}",
          file=sys.stderr)


def _locate(h, lam0, window, seeds, rng_seed):
    """Eigenpair of ``h`` nearest to ``lam0`` within ``window``."""
    if h.is_tree():
        cands = tree_spectrum(h, (lam0 - window, lam0 + window), 801)
    else:
        cands = multistart_spectrum(h, seeds, rng_seed)
    cands = [e for e in cands if abs(e.lam - lam0) <= window]
    if not cands:
        raise CliError(EXIT_NO_EIGENPAIR, f"no eigenpair within {window:g} of {lam0:g}")
    return min(cands, key=lambda e: abs(e.lam - lam0))


def cmd_hf(args):
    g, cut = _load(args.graph)
    _need_cut(cut, one=True)
    a = float(_alpha(args.alpha, cut)[0])
    h = build_cut_operator(g, cut, a)
    window = args.window if args.window is not None else 0.1 * (1 + abs(args.lambda_))
    ep = _locate(h, args.lambda_, window, args.seeds, args.rng_seed)
    slope = hf_eigenvalue_derivative(g, cut, a, ep.f, 0)
    step = args.step
    side = []
    for s in (a - step, a + step):
        if s == 0:
            raise CliError(EXIT_INPUT, "finite-difference step crosses alpha = 0")
        try:
            e, _ = newton_solve(build_cut_operator(g, cut, s), ep.lam, ep.f, tol=1e-12)
        except NewtonFailure as exc:
            raise CliError(EXIT_NO_EIGENPAIR, f"finite-difference solve failed: {exc}")
        side.append(e.lam)
    fd = (side[1] - side[0]) / (2 * step)
    _emit({"alpha": a, "lambda": ep.lam, "dlambda_dalpha": slope, "fd_check": fd,
           "fd_step": step, "f": _floats(ep.f), "residual": ep.residual})


def cmd_regularity(args):
    g, cut = _load(args.graph)
    if args.alpha is not None:
        _need_cut(cut)
        g = build_cut_operator(g, cut, _alpha(args.alpha, cut))
    try:
        f = np.array([float(x) for x in args.f.split(",")])
    except ValueError:
        raise CliError(EXIT_INPUT, f"bad --f {args.f!r}")
    if f.size != g.n:
        raise CliError(EXIT_INPUT, f"--f needs {g.n} values")
    try:
        f = normalize(g, f)
    except GraphError as exc:
        raise CliError(EXIT_INPUT, str(exc))
    res = residual(g, args.lambda_, f)
    if res > args.res_tol:
        raise CliError(EXIT_NO_EIGENPAIR, f"not an eigenpair: residual {res:.3e}")
    if g.p < 2:
        raise CliError(EXIT_PRECONDITION, "Hessian needs p >= 2")
    rep = regularity(g, args.lambda_, f, args.tol)
    _emit({"lambda": args.lambda_, "f": _floats(f), "residual": res,
           **rep.as_dict()})


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plapcut",
                                 description="Signed p-Laplacian eigenpairs and edge cuts.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenpairs of a graph or of its cut operator")
    sp.add_argument("graph")
    sp.add_argument("--method", choices=["tree", "newton"], default="newton")
    sp.add_argument("--seeds", type=int, default=200)
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--lambda-min", type=float)
    sp.add_argument("--lambda-max", type=float)
    sp.add_argument("--grid", type=int, default=2001, help="lambda samples for --method tree")
    sp.add_argument("--alpha", help="cut parameters, comma separated; applies the file's cut")
    sp.set_defaults(func=cmd_spectrum)

    tp = sub.add_parser("trace", help="eigenvalue curves over alpha and their critical points")
    tp.add_argument("graph")
    tp.add_argument("--alpha-min", type=float)
    tp.add_argument("--alpha-max", type=float)
    tp.add_argument("--points", type=int, default=400)
    tp.add_argument("--lambda-min", type=float)
    tp.add_argument("--lambda-max", type=float)
    tp.add_argument("--grid", type=int, default=2001)
    tp.add_argument("--out-csv")
    tp.add_argument("--out-json")
    tp.set_defaults(func=cmd_trace)

    hp = sub.add_parser("hf", help="Hellmann-Feynman slope with a finite-difference check")
    hp.add_argument("graph")
    hp.add_argument("--alpha", required=True)
    hp.add_argument("--lambda", dest="lambda_", type=float, required=True)
    hp.add_argument("--window", type=float, help="search half-width around --lambda")
    hp.add_argument("--step", type=float, default=1e-5)
    hp.add_argument("--seeds", type=int, default=100)
    hp.add_argument("--rng-seed", type=int, default=0)
    hp.set_defaults(func=cmd_hf)

    rp = sub.add_parser("regularity", help="kernel dimension of the Hessian at an eigenpair")
    rp.add_argument("graph")
    rp.add_argument("--lambda", dest="lambda_", type=float, required=True)
    rp.add_argument("--f", required=True, help="vertex values, comma separated")
    rp.add_argument("--alpha", help="evaluate on the cut operator at these parameters")
    rp.add_argument("--tol", type=float, default=REGULARITY_TOL)
    rp.add_argument("--res-tol", type=float, default=1e-6)
    rp.set_defaults(func=cmd_regularity)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (GraphError, CutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HessianUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return 0


if __name__ == "__main__":
    sys.exit(main())
