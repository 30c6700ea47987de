"""Eigenvalue curves of a one-parameter cut family and their critical points.

Critical values of lambda(alpha) are eigenvalues of the uncut graph with
suitably chosen signs on the cut edge; this module traces the curves,
locates the zeros of the Hellmann-Feynman slope and certifies each one
against the full graph.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .direct import NewtonFailure, newton_solve
from .graph import CutSpec, GraphError, SignedGraph
from .operator import residual
from .perturbation import RegularityReport, hf_eigenvalue_derivative, hf_gradient, regularity
from .surgery import CutError, CutFamily, extend_sigma, reconstruct_alpha
from .tree import NotATreeError, spectral_bounds, tree_spectrum


@dataclass
class Sample:
    alpha: float
    lam: float
    f: np.ndarray
    slope: float


@dataclass
class EigCurve:
    branch_id: int
    samples: list[Sample] = field(default_factory=list)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([s.alpha for s in self.samples])

    @property
    def lams(self) -> np.ndarray:
        return np.array([s.lam for s in self.samples])

    @property
    def slopes(self) -> np.ndarray:
        return np.array([s.slope for s in self.samples])


@dataclass
class CriticalPoint:
    alpha: float
    lam: float
    f: np.ndarray
    grad: np.ndarray
    regularity: RegularityReport
    sigma: np.ndarray | None       # full edge signs, aligned with g.edges
    note: str                      # why certification failed, else ""
    certified: bool
    residual: float                # full-graph residual (inf if no sigma)
    cut_residual: float
    branch_id: int


def default_alpha_grid(points: int = 200, lo: float = -2.0, hi: float = 1.5,
                       exclude: float = 1e-3) -> np.ndarray:
    """Symmetric log grid avoiding neighbourhoods of alpha = 0 and alpha = 1."""
    pos = np.logspace(lo, hi, points)
    grid = np.concatenate([-pos[::-1], pos])
    keep = (np.abs(grid) > exclude) & (np.abs(grid - 1.0) > exclude)
    return grid[keep]


def linear_alpha_grid(lo: float, hi: float, points: int,
                      exclude: float = 1e-3) -> np.ndarray:
    """Uniform grid on [lo, hi] minus neighbourhoods of alpha = 0 and alpha = 1."""
    grid = np.linspace(lo, hi, points)
    return grid[(np.abs(grid) > exclude) & (np.abs(grid - 1.0) > exclude)]


def _single_cut_family(g: SignedGraph, cut: CutSpec) -> CutFamily:
    if cut is None or len(cut) != 1:
        raise CutError("tracing supports exactly one cut edge")
    fam = CutFamily(g, cut)
    if not fam.base.is_tree():
        raise NotATreeError("cut graph is not a tree")
    return fam


def trace(g: SignedGraph, cut: CutSpec, alpha_grid=None, lambda_range=None,
          grid: int = 2001, match_factor: float = 10.0,
          jump_floor: float = 1e-2) -> list[EigCurve]:
    """Eigenvalue branches lambda(alpha) of the cut operator over ``alpha_grid``.

    Eigenvalues at neighbouring grid points are paired by an assignment on
    the trapezoid-predicted jump |lam' - lam - (s + s')/2 da|; a pair is
    rejected when that error exceeds ``match_factor`` times the predicted
    change plus ``jump_floor * (1 + |lam|)``. Branches never continue across
    alpha = 0.
    """
    fam = _single_cut_family(g, cut)
    alphas = default_alpha_grid() if alpha_grid is None else np.asarray(alpha_grid, float)
    if alphas.size == 0:
        raise ValueError("empty alpha grid")
    if np.any(np.diff(alphas) <= 0):
        raise ValueError("alpha grid must be strictly increasing")
    if np.any(alphas == 0) or np.any(alphas == 1):
        raise CutError("alpha grid must exclude 0 and 1")

    curves: list[EigCurve] = []
    active: list[EigCurve] = []
    prev_alpha = None
    for a in alphas:
        h = fam.at(a)
        rng = lambda_range if lambda_range is not None else spectral_bounds(h)
        pts = [Sample(float(a), e.lam, e.f, hf_eigenvalue_derivative(g, cut, a, e.f, 0))
               for e in tree_spectrum(h, rng, grid)]
        matched: dict[int, EigCurve] = {}
        if active and pts and prev_alpha is not None and prev_alpha * a > 0:
            da = a - prev_alpha
            cost = np.full((len(active), len(pts)), np.inf)
            for i, c in enumerate(active):
                s0 = c.samples[-1]
                for j, s1 in enumerate(pts):
                    pred = 0.5 * (s0.slope + s1.slope) * da
                    err = abs(s1.lam - s0.lam - pred)
                    if err <= match_factor * abs(pred) + jump_floor * (1 + abs(s0.lam)):
                        cost[i, j] = err
            big = 1e300
            rows, cols = linear_sum_assignment(np.where(np.isfinite(cost), cost, big))
            for i, j in zip(rows, cols):
                if np.isfinite(cost[i, j]):
                    matched[j] = active[i]
        new_active = []
        for j, s in enumerate(pts):
            c = matched.get(j)
            if c is None:
                c = EigCurve(len(curves))
                curves.append(c)
            c.samples.append(s)
            new_active.append(c)
        active = new_active
        prev_alpha = a
    return curves


def _solve_at(fam: CutFamily, alpha, lam, f, window=None):
    """Eigenpair of the cut operator at ``alpha`` continuing (lam, f).

    Newton from the warm start first; near nonregular points Newton stalls
    or lands on another branch, and the tree scan on a lambda window of
    half-width ``window`` (default 0.05 (1 + |lam|)) takes over.
    """
    h = fam.at(alpha)
    if window is None:
        window = 0.05 * (1 + abs(lam))
    try:
        ep, _ = newton_solve(h, lam, f, tol=1e-11)
        if abs(ep.lam - lam) <= window:
            return ep
    except NewtonFailure:
        pass
    near = [e for e in tree_spectrum(h, (lam - window, lam + window), 401)]
    if not near:
        raise NewtonFailure(f"no eigenvalue near {lam} at alpha={alpha}")
    return min(near, key=lambda e: abs(e.lam - lam))


def find_critical_points(curves: list[EigCurve], g: SignedGraph, cut: CutSpec, *,
                         xtol: float = 1e-13, polish: bool = True,
                         res_tol: float = 1e-8, grad_tol: float = 1e-8,
                         sign_tol: float = 1e-6) -> list[CriticalPoint]:
    """Sign changes of the slope along each branch, refined and certified.

    Each bracket is bisected in alpha, re-solving the cut eigenpair by Newton
    warm-started from the nearer endpoint. With ``polish``, the located
    point is then refined by Newton on the uncut graph carrying the extended
    signs and alpha is recomputed from the refined eigenvector; this pins
    critical points where the slope vanishes only like a fractional power.
    """
    fam = _single_cut_family(g, cut)
    out = []
    for c in curves:
        s = c.slopes
        for k in range(len(s) - 1):
            if not (s[k] == 0 or s[k] * s[k + 1] < 0):
                continue
            a0, a1 = c.samples[k], c.samples[k + 1]
            if a0.alpha * a1.alpha < 0:
                continue
            try:
                cp = _refine(fam, g, cut, a0, a1, xtol, polish, res_tol, grad_tol,
                             sign_tol, c.branch_id)
            except (NewtonFailure, CutError) as exc:
                cp = _uncertified(fam, g, cut, a0, c.branch_id, f"refinement failed: {exc}")
            out.append(cp)
        if len(s) and s[-1] == 0:
            a0 = c.samples[-1]
            out.append(_certify(fam, g, cut, a0.alpha, a0.lam, a0.f, polish, res_tol,
                                grad_tol, sign_tol, c.branch_id))
    return out


def _refine(fam, g, cut, s0, s1, xtol, polish, res_tol, grad_tol, sign_tol, bid):
    lo = (s0.alpha, s0.lam, s0.f, s0.slope)
    hi = (s1.alpha, s1.lam, s1.f, s1.slope)
    if s0.slope == 0:
        return _certify(fam, g, cut, s0.alpha, s0.lam, s0.f, polish, res_tol,
                        grad_tol, sign_tol, bid)
    for _ in range(200):
        if abs(hi[0] - lo[0]) <= xtol * max(1.0, abs(lo[0])):
            break
        mid = 0.5 * (lo[0] + hi[0])
        if mid in (lo[0], hi[0]):
            break
        near = lo if abs(mid - lo[0]) <= abs(mid - hi[0]) else hi
        # the branch may move by the bracket's own lambda span
        jump = 1e-2 * (1 + abs(near[1])) + abs(hi[1] - lo[1])
        ep = _solve_at(fam, mid, near[1], near[2], jump)
        if abs(ep.lam - near[1]) > jump:
            raise NewtonFailure("warm-started solve jumped branches")
        sl = hf_eigenvalue_derivative(g, cut, mid, ep.f, 0)
        ep_f = ep.f if np.dot(ep.f, near[2]) >= 0 else -ep.f
        cur = (mid, ep.lam, ep_f, sl)
        if sl == 0:
            lo = hi = cur
            break
        if np.sign(sl) == np.sign(lo[3]):
            lo = cur
        else:
            hi = cur
    best = lo if abs(lo[3]) <= abs(hi[3]) else hi
    return _certify(fam, g, cut, best[0], best[1], best[2], polish, res_tol,
                    grad_tol, sign_tol, bid)


def _certify(fam, g, cut, alpha, lam, f, polish, res_tol, grad_tol, sign_tol, bid):
    note = ""
    sigma = None
    full_res = np.inf
    if polish:
        try:
            ext = extend_sigma(g, cut, alpha, lam, f, crit_tol=1e-2, sign_tol=0.1)
            ep, _ = newton_solve(ext.graph, lam, f, tol=1e-3 * res_tol, polish=60)
            if abs(ep.lam - lam) < 1e-4 * (1 + abs(lam)):
                f_new = ep.f if np.dot(ep.f, f) >= 0 else -ep.f
                a_new = float(reconstruct_alpha(ext.graph, cut, f_new)[0])
                if abs(a_new - alpha) < 1e-3 * max(1.0, abs(alpha)):
                    alpha, lam, f = a_new, ep.lam, f_new
                else:
                    note = "polish moved alpha; kept unpolished point"
            else:
                note = "polish jumped eigenvalue; kept unpolished point"
        except (CutError, NewtonFailure) as exc:
            note = f"polish skipped: {exc}"
    h = fam.at(alpha)
    cut_res = residual(h, lam, f)
    grad = hf_gradient(g, cut, alpha, f)
    reg = regularity(h, lam, f)
    try:
        ext = extend_sigma(g, cut, alpha, lam, f, sign_tol=sign_tol)
        sigma, full_res = ext.sigma, ext.residual
    except CutError as exc:
        note = str(exc)
    certified = (sigma is not None and full_res < res_tol
                 and float(np.max(np.abs(grad))) < grad_tol)
    if sigma is not None and not certified and not note:
        note = f"full-graph residual {full_res:.2e}, |grad| {np.max(np.abs(grad)):.2e}"
    return CriticalPoint(float(alpha), float(lam), np.asarray(f), grad, reg, sigma,
                         note if not certified else "", certified, float(full_res),
                         float(cut_res), bid)


def _uncertified(fam, g, cut, s, bid, note):
    h = fam.at(s.alpha)
    return CriticalPoint(s.alpha, s.lam, s.f, hf_gradient(g, cut, s.alpha, s.f),
                         regularity(h, s.lam, s.f), None, note, False, float("inf"),
                         residual(h, s.lam, s.f), bid)


def certified_values(points: list[CriticalPoint], tol: float = 1e-6) -> list[float]:
    """Sorted distinct eigenvalues among certified critical points."""
    vals = sorted(cp.lam for cp in points if cp.certified)
    out = []
    for v in vals:
        if not out or abs(v - out[-1]) > tol * max(1.0, abs(v)):
            out.append(v)
    return out


CSV_HEADER = ["alpha", "branch", "lambda", "slope"]


def curves_csv(curves: list[EigCurve]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in curves:
        for s in c.samples:
            w.writerow([repr(float(s.alpha)), c.branch_id, repr(float(s.lam)),
                        repr(float(s.slope))])
    return buf.getvalue()


def critical_points_json(points: list[CriticalPoint], g: SignedGraph) -> str:
    items = []
    for cp in points:
        sigma = None
        if cp.sigma is not None:
            sigma = {f"{g.vertices[a]}-{g.vertices[b]}": int(s)
                     for (a, b), s in zip(g.edges, cp.sigma)}
        items.append({
            "alpha": cp.alpha,
            "lambda": cp.lam,
            "f": [float(x) for x in cp.f],
            "grad": [float(x) for x in cp.grad],
            "regular": cp.regularity.is_regular,
            "sigma": sigma,
            "certified": cp.certified,
            "residual": cp.residual if np.isfinite(cp.residual) else None,
            "branch": cp.branch_id,
            "note": cp.note,
        })
    return json.dumps(items, indent=2)


def curve_report(curves, critical_points, g: SignedGraph, csv_sink=None, json_sink=None):
    """Write the curve CSV and critical-point JSON; returns both strings.

    Sinks may be paths or writable text streams.
    """
    text_csv = curves_csv(curves)
    text_json = critical_points_json(critical_points, g)
    for sink, text in ((csv_sink, text_csv), (json_sink, text_json)):
        if sink is None:
            continue
        if hasattr(sink, "write"):
            sink.write(text)
        else:
            with open(sink, "w", newline="") as fh:
                fh.write(text)
    return text_csv, text_json
