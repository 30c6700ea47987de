"""Eigenvalues of the p-Schroedinger operator on trees by leaf-to-root elimination.

Rooting the tree, each vertex equation expresses the parent value through
the vertex value and the values of its children. Eliminating from the
leaves leaves one scalar equation in lambda at the root.

Two forms are provided. :func:`secular` is the ratio recursion
r_u = f_u / f_parent(u); it has poles where some non-root value vanishes.
:func:`shoot` keeps unnormalized vertex values instead of ratios, so its
root residual is continuous in lambda; :func:`tree_spectrum` brackets
zeros of that residual and reconstructs the eigenvector from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import GraphError, SignedGraph, normalize
from .operator import Eigenpair, phi_p, phi_p_inverse, residual

POLE_TOL = 1e-12


class NotATreeError(GraphError):
    pass


@dataclass
class SecularEvaluation:
    value: float | None          # None marks a pole
    ratios: dict[int, float]     # r_u = f_u / f_parent(u) for non-root u
    pole_flags: list[int] = field(default_factory=list)

    @property
    def is_pole(self) -> bool:
        return self.value is None

    def vector(self, g: SignedGraph, root: int) -> np.ndarray:
        """Propagate the ratios from f_root = 1."""
        if self.is_pole:
            raise ValueError("no eigenvector at a pole")
        parent, order = rooted_order(g, root)
        f = np.zeros(g.n)
        f[root] = 1.0
        for u in reversed(order):
            if u != root:
                f[u] = self.ratios[u] * f[parent[u]]
        return f


def default_root(g: SignedGraph) -> int:
    """First vertex of maximum degree."""
    return int(np.argmax(g.degrees()))


def rooted_order(g: SignedGraph, root: int):
    """Parent map and a leaves-first vertex order of the tree rooted at ``root``."""
    if not g.is_tree():
        raise NotATreeError("graph is not a tree")
    parent = {root: -1}
    order = [root]
    k = 0
    while k < len(order):
        u = order[k]
        for v in g.neighbors(u):
            if v not in parent:
                parent[v] = u
                order.append(v)
        k += 1
    return parent, order[::-1]


def _children(parent, order):
    ch = {u: [] for u in order}
    for u in order:
        if parent[u] >= 0:
            ch[parent[u]].append(u)
    return ch


def secular(g: SignedGraph, root: int, lam: float) -> SecularEvaluation:
    """Ratio recursion; the root value vanishes exactly at eigenvalues whose
    eigenvector is nowhere zero along the recursion."""
    p = g.p
    parent, order = rooted_order(g, root)
    ch = _children(parent, order)
    ratios: dict[int, float] = {}
    poles = []
    for u in order:
        s = lam * g.rho[u] - g.kappa[u]
        for c in ch[u]:
            s -= g.weight(u, c) * phi_p(p, 1.0 - g.sign(u, c) * ratios[c])
        if u == root:
            if poles:
                return SecularEvaluation(None, ratios, poles)
            return SecularEvaluation(float(s), ratios, poles)
        w = parent[u]
        denom = 1.0 - phi_p_inverse(p, s / g.weight(u, w))
        if abs(denom) < POLE_TOL:
            poles.append(u)
            return SecularEvaluation(None, ratios, poles)
        ratios[u] = g.sign(u, w) / denom
    raise AssertionError("unreachable")


class _Plan:
    """Precomputed elimination order for vectorized shooting."""

    def __init__(self, g: SignedGraph, root: int):
        self.g = g
        self.root = root
        self.parent, self.order = rooted_order(g, root)
        self.children = _children(self.parent, self.order)
        self.subtree = {}
        for u in self.order:
            s = [u]
            for c in self.children[u]:
                s.extend(self.subtree[c])
            self.subtree[u] = s


def shoot(g: SignedGraph, root: int, lam, plan: _Plan | None = None):
    """Root residual of the leaf-to-root elimination without ratios.

    For each lambda (array-valued), every subtree is solved up to a
    positive scale: leaves start at 1, a vertex with several children
    rescales each child subtree by the product of its siblings' parent
    values, and the vertex equation then fixes the parent value. Returns
    ``(value, F)`` where ``value`` is the root equation residual
    (H f - lam rho phi_p f at the root) and ``F`` holds the vertex values,
    one row per lambda. Both are continuous in lambda.
    """
    plan = plan or _Plan(g, root)
    p = g.p
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    m, n = lam.size, g.n
    F = np.zeros((m, n))
    top = {}   # value the subtree of u assigns to parent(u)
    for u in plan.order:
        kids = plan.children[u]
        tops = [top[c] for c in kids]
        fu = np.ones(m)
        for k, c in enumerate(kids):
            scale = np.ones(m)
            for j, t in enumerate(tops):
                if j != k:
                    scale = scale * t
            F[:, plan.subtree[c]] *= scale[:, None]
            fu = fu * tops[k]
        F[:, u] = fu
        r = (lam * g.rho[u] - g.kappa[u]) * phi_p(p, fu)
        for c in kids:
            r = r - g.weight(u, c) * phi_p(p, fu - g.sign(u, c) * F[:, c])
        if u == plan.root:
            value = -r
            break
        w = plan.parent[u]
        t = g.sign(u, w) * (fu - phi_p_inverse(p, r / g.weight(u, w)))
        # positive rescaling keeps the magnitudes O(1)
        sub = plan.subtree[u]
        big = np.maximum(np.max(np.abs(F[:, sub]), axis=1), np.abs(t))
        big[big == 0] = 1.0
        F[:, sub] /= big[:, None]
        top[u] = t / big
    big = np.max(np.abs(F), axis=1)
    big[big == 0] = 1.0
    return value / big ** (p - 1), F / big[:, None]


def spectral_bounds(g: SignedGraph) -> tuple[float, float]:
    """Crude interval containing every eigenvalue."""
    lo = float(np.min(g.kappa / g.rho)) - 1.0
    maxdeg = int(np.max(g.degrees())) if g.edges else 0
    maxw = float(np.max(g.omega)) if g.edges else 0.0
    hi = (2.0 ** g.p * maxdeg * maxw + float(np.max(g.kappa))) / float(np.min(g.rho)) + 1.0
    return lo, max(hi, lo + 1.0)


def _bisect(fun, a, b, fa, xtol):
    """Vectorized bisection on brackets [a, b] with sign(f(a)) != sign(f(b))."""
    a, b, fa = a.copy(), b.copy(), fa.copy()
    for _ in range(200):
        if np.all(b - a <= xtol * np.maximum(1.0, np.abs(a))):
            break
        mid = 0.5 * (a + b)
        fm = fun(mid)
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, mid, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, mid)
    return 0.5 * (a + b)


def tree_spectrum(g: SignedGraph, lambda_range: tuple[float, float] | None = None,
                  grid: int = 2001, root: int | None = None, leaf_roots: bool = True,
                  xtol: float = 1e-12, res_tol: float = 1e-9,
                  refine: int = 64) -> list[Eigenpair]:
    """All eigenpairs found by scanning the tree's root residual over lambda.

    Sign changes between grid samples are bisected to ``xtol``; near-tangent
    local minima of |value| are rescanned on a ``refine``-point subgrid to
    catch close root pairs. Candidates are kept when the normalized
    eigenvector has residual below ``res_tol``.

    The scan runs from ``root`` (default: a maximum-degree vertex) and, with
    ``leaf_roots``, again from every leaf: an eigenvector vanishing at a
    vertex with two or more children collapses the elimination there, and a
    different rooting usually avoids that.
    """
    if not g.is_tree():
        raise NotATreeError("graph is not a tree")
    if lambda_range is None:
        lambda_range = spectral_bounds(g)
    lo, hi = map(float, lambda_range)
    if not hi > lo or grid < 2:
        raise ValueError("empty lambda range")
    roots = [default_root(g) if root is None else root]
    if leaf_roots:
        roots += [u for u in np.flatnonzero(g.degrees() == 1) if u not in roots]
    lam = np.linspace(lo, hi, grid)
    found = []
    for r in roots:
        found += _scan(g, int(r), lam, xtol, res_tol, refine)
    return _merge(found)


def _scan(g, root, lam, xtol, res_tol, refine):
    plan = _Plan(g, root)

    def fun(x):
        return shoot(g, root, x, plan)[0]

    val = fun(lam)
    sa, sb = _brackets(lam, val)
    # |value| dips without a sign change: possible pair of close roots
    av = np.abs(val)
    dips = np.flatnonzero((av[1:-1] < av[:-2]) & (av[1:-1] < av[2:])
                          & (np.sign(val[:-2]) == np.sign(val[2:]))) + 1
    for k in dips:
        sub = np.linspace(lam[k - 1], lam[k + 1], refine)
        a2, b2 = _brackets(sub, fun(sub))
        sa = np.concatenate([sa, a2])
        sb = np.concatenate([sb, b2])
    if sa.size == 0:
        return []
    exact = sa == sb
    roots = np.empty(sa.size)
    roots[exact] = sa[exact]
    if np.any(~exact):
        roots[~exact] = _bisect(fun, sa[~exact], sb[~exact], fun(sa[~exact]), xtol)
    roots = np.unique(roots)
    _, F = shoot(g, root, roots, plan)
    out = []
    for r, f in zip(roots, F):
        if not np.any(f):
            continue
        fn = normalize(g, f)
        res = residual(g, r, fn)
        if res < res_tol:
            out.append(Eigenpair(float(r), fn, res))
    return out


def _brackets(x, y):
    s = np.sign(y)
    zero = np.flatnonzero(s == 0)
    change = np.flatnonzero(s[:-1] * s[1:] < 0)
    a = np.concatenate([x[change], x[zero]])
    b = np.concatenate([x[change + 1], x[zero]])
    return a, b


def _merge(pairs, lam_tol=1e-9, f_tol=1e-3):
    # eigenvectors at nonregular points are only accurate to ~cbrt(xtol)
    pairs = sorted(pairs, key=lambda e: e.lam)
    out = []
    for e in pairs:
        if out and abs(e.lam - out[-1].lam) < lam_tol * max(1.0, abs(e.lam)) and \
                min(np.max(np.abs(e.f - out[-1].f)), np.max(np.abs(e.f + out[-1].f))) < f_tol:
            if e.residual < out[-1].residual:
                out[-1] = e
            continue
        out.append(e)
    return out
