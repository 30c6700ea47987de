"""Reference graphs and the closed-form regularity criterion for the cut triangle.

The triangle has vertices u, v, w. Cutting edge uv leaves the path u-w-v
with potentials on u and v; for p = 4 and unit signs an eigenpair of that
operator is regular exactly when f_u != f_w and f_v != f_w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .graph import CutSpec, SignedGraph, make_cut, make_graph, normalize
from .operator import residual
from .perturbation import REGULARITY_TOL, RegularityReport, regularity
from .surgery import build_cut_operator
from .tree import tree_spectrum

CBRT2 = 2.0 ** (1.0 / 3.0)
TRIANGLE_TOP = (1.0 + CBRT2) ** 3


def triangle_graph(omega=(1.0, 1.0, 1.0), p: float = 4.0, sigma=(1, 1, 1)) -> SignedGraph:
    """Triangle u, v, w; ``omega`` and ``sigma`` are ordered (uv, uw, vw)."""
    return make_graph(["u", "v", "w"], [("u", "v"), ("u", "w"), ("v", "w")], p,
                      omega=omega, sigma=sigma)


def triangle_cut(g: SignedGraph) -> CutSpec:
    return make_cut(g, [("u", "v")])


def pendant_graph(p: float = 4.0, omega=None, sigma=None) -> SignedGraph:
    """Triangle 1-2-3 with pendant vertex 4 on 3; edges ordered 12, 13, 23, 34."""
    return make_graph(["1", "2", "3", "4"], [("1", "2"), ("1", "3"), ("2", "3"), ("3", "4")],
                      p, omega=omega, sigma=sigma)


def pendant_path_cut(g: SignedGraph) -> CutSpec:
    """Cutting 13 leaves the path 2-1 ... 3-4 joined through 2-3."""
    return make_cut(g, [("1", "3")])


def pendant_star_cut(g: SignedGraph) -> CutSpec:
    """Cutting 12 leaves a star centred at 3."""
    return make_cut(g, [("1", "2")])


# (lambda, unnormalized f on (u, v, w), alpha); the whole list for omega = 1
NONREGULAR_TABLE = (
    (0.0, (1.0, 1.0, 1.0), 1.0),
    (TRIANGLE_TOP, (1.0, -CBRT2, 1.0), -CBRT2),
    (TRIANGLE_TOP, (-CBRT2, 1.0, 1.0), -1.0 / CBRT2),
)


class NotAnEigenpairError(ValueError):
    pass


@dataclass(frozen=True)
class TriangleVerdict:
    regular: bool              # closed-form criterion
    witness: RegularityReport  # SVD kernel count of the Hessian
    hessian_rank: int
    residual: float

    @property
    def verdict(self) -> str:
        return "regular" if self.regular else "nonregular"

    @property
    def agrees(self) -> bool:
        return self.regular == self.witness.is_regular


def cut_triangle(omega, alpha, p: float = 4.0) -> SignedGraph:
    g = triangle_graph(omega, p)
    return build_cut_operator(g, triangle_cut(g), alpha)


def classify_triangle_cut(omega, alpha, lam, f, *, res_tol: float = 1e-8,
                          tol: float = REGULARITY_TOL) -> TriangleVerdict:
    """Regularity of an eigenpair of the cut triangle, by criterion and by SVD.

    ``f`` is ordered (u, v, w) and rescaled to unit norm first. Entries are
    compared relative to max|f| at sqrt(tol), since the Hessian couplings
    scale like (f_u - f_w)^2.
    """
    h = cut_triangle(omega, alpha)
    f = normalize(h, np.asarray(f, dtype=float))
    res = residual(h, lam, f)
    if res > res_tol:
        raise NotAnEigenpairError(f"residual {res:.3e} exceeds {res_tol:.1e}")
    eps = np.sqrt(tol) * np.max(np.abs(f))
    fu, fv, fw = f
    regular = abs(fu - fw) > eps and abs(fv - fw) > eps
    rep = regularity(h, lam, f, tol)
    return TriangleVerdict(bool(regular), rep, h.n - rep.kernel_dim, float(res))


def nonregular_table(omega=(1.0, 1.0, 1.0)) -> list[tuple[float, float, TriangleVerdict]]:
    """Classify every row of the nonregular table; returns (lambda, alpha, verdict)."""
    return [(lam, alpha, classify_triangle_cut(omega, alpha, lam, f))
            for lam, f, alpha in NONREGULAR_TABLE]


def random_triangle_cut_eigenpairs(count: int, rng=None, random_omega: bool = True,
                                   alpha_range=(-4.0, 4.0)):
    """Yield ``count`` tuples (omega, alpha, lam, f) from random cut triangles.

    Each instance draws alpha uniformly (away from 0) and, with
    ``random_omega``, weights in [0.5, 2]; all its tree-solver eigenpairs
    are yielded before the next instance is drawn.
    """
    rng = np.random.default_rng(rng)
    made = 0
    while made < count:
        omega = tuple(rng.uniform(0.5, 2.0, 3)) if random_omega else (1.0, 1.0, 1.0)
        alpha = 0.0
        while abs(alpha) < 1e-2:
            alpha = float(rng.uniform(*alpha_range))
        for ep in tree_spectrum(cut_triangle(omega, alpha), grid=801):
            yield omega, alpha, ep.lam, ep.f
            made += 1
            if made == count:
                return


def nonregular_triangle_cut_eigenpairs(omega, alpha_range=(-10.0, 10.0), grid: int = 4001):
    """Eigenpairs of the cut triangle with f_u = f_w or f_v = f_w.

    With f_u = f_w = 1 the equation at u gives lambda = omega_uv (1 - alpha)^3
    and the one at w gives f_v = 1 - cbrt(lambda / omega_vw); what remains is
    a scalar equation in alpha from vertex v, solved by bracketing. The case
    f_v = f_w follows by exchanging u and v, which sends alpha to 1/alpha.
    Returns (alpha, lam, f) tuples.
    """
    wuv, wuw, wvw = map(float, omega)
    out = _fu_equals_fw(omega, alpha_range, grid)
    for a, lam, f in _fu_equals_fw((wuv, wvw, wuw), alpha_range, grid):
        out.append((1.0 / a, lam, f[[1, 0, 2]]))
    return out


def _fu_equals_fw(omega, alpha_range, grid):
    wuv, wuw, wvw = map(float, omega)

    def parts(a):
        lam = wuv * (1.0 - a) ** 3
        fv = 1.0 - np.cbrt(lam / wvw)
        return lam, fv

    def eq_v(a):
        lam, fv = parts(a)
        return wuv * (1.0 - 1.0 / a) ** 3 * fv ** 3 + wvw * (fv - 1.0) ** 3 - lam * fv ** 3

    a = np.linspace(*alpha_range, grid)
    a = a[np.abs(a) > 1e-6]
    r = np.array([eq_v(x) for x in a])
    out = []
    for k in np.flatnonzero(np.sign(r[:-1]) * np.sign(r[1:]) < 0):
        if a[k] < 0 < a[k + 1]:
            continue  # pole at alpha = 0
        root = brentq(eq_v, a[k], a[k + 1], xtol=1e-15)
        lam, fv = parts(root)
        f = np.array([1.0, fv, 1.0])
        if abs(root - 1.0) < 1e-9:
            continue  # lambda = 0 with constant f, listed separately
        if residual(cut_triangle(omega, root), lam, f) < 1e-8 * max(1.0, lam):
            out.append((float(root), float(lam), f))
    return out
