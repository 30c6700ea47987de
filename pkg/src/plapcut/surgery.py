"""Edge-cut surgery: replace cut edges by alpha-dependent vertex potentials.

For a cut edge with representative ``(u, v)`` and parameter ``alpha``, the
edge is removed and ``u`` gains ``omega*phi_p(1 - alpha)`` while ``v`` gains
``omega*phi_p(1 - 1/alpha)`` in its potential. Reversing the orientation of
a cut edge together with ``alpha -> 1/alpha`` gives the same operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import CutSpec, GraphError, SignedGraph
from .operator import _abs_pow, phi_p, residual


class CutError(ValueError):
    pass


class NotCriticalError(CutError):
    """Eigenpair fails |f_v| = |alpha| |f_u| on some cut edge."""


def _check_alpha(cut: CutSpec, alpha) -> np.ndarray:
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    if alpha.shape != (len(cut),):
        raise CutError(f"expected {len(cut)} cut parameters, got {alpha.size}")
    if np.any(alpha == 0):
        raise CutError("cut parameter alpha = 0 is not admissible")
    return alpha


def cut_graph(g: SignedGraph, cut: CutSpec) -> SignedGraph:
    """The graph with the cut edges removed and potentials left unchanged."""
    drop = {g.edge_index(u, v) for u, v in cut.edges}
    keep = [k for k in range(len(g.edges)) if k not in drop]
    return g.replace(edges=tuple(g.edges[k] for k in keep),
                     omega=g.omega[keep], sigma=g.sigma[keep])


def cut_potential(g: SignedGraph, cut: CutSpec, alpha) -> np.ndarray:
    alpha = _check_alpha(cut, alpha)
    kappa = np.array(g.kappa, dtype=float)
    for (u, v), a in zip(cut.edges, alpha):
        w = g.weight(u, v)
        kappa[u] += w * phi_p(g.p, 1.0 - a)
        kappa[v] += w * phi_p(g.p, 1.0 - 1.0 / a)
    return kappa


def build_cut_operator(g: SignedGraph, cut: CutSpec, alpha) -> SignedGraph:
    """Cut graph carrying the alpha-dependent potential."""
    return cut_graph(g, cut).replace(kappa=cut_potential(g, cut, alpha))


@dataclass
class CutFamily:
    """A cut graph whose potential is re-evaluated for each alpha."""

    graph: SignedGraph
    cut: CutSpec

    def __post_init__(self):
        self.base = cut_graph(self.graph, self.cut)

    def at(self, alpha) -> SignedGraph:
        return self.base.replace(kappa=cut_potential(self.graph, self.cut, alpha))


def reconstruct_alpha(g: SignedGraph, cut: CutSpec, f, zero_tol: float = 1e-12) -> np.ndarray:
    """Cut parameters under which an eigenvector of ``g`` solves the cut problem.

    alpha_i = sigma f_v / f_u, or -1 when both endpoints vanish. Entries with
    magnitude below ``zero_tol * max|f|`` are treated as zero.
    """
    f = np.asarray(f, dtype=float)
    eps = zero_tol * np.max(np.abs(f))
    out = np.empty(len(cut))
    for i, (u, v) in enumerate(cut.edges):
        zu, zv = abs(f[u]) <= eps, abs(f[v]) <= eps
        if zu != zv:
            raise CutError(
                f"eigenvector vanishes at exactly one endpoint of cut edge "
                f"{g.vertices[u]}-{g.vertices[v]}")
        out[i] = -1.0 if zu else g.sign(u, v) * f[v] / f[u]
    return out


@dataclass(frozen=True)
class SigmaExtension:
    sigma: np.ndarray   # aligned with g.edges
    graph: SignedGraph  # g carrying the extended signs
    residual: float     # full-graph eigen-residual of (lam, f)
    raw: np.ndarray     # unrounded alpha f_u / f_v per cut edge


def extend_sigma(g: SignedGraph, cut: CutSpec, alpha, lam, f, *,
                 crit_tol: float = 1e-6, sign_tol: float = 1e-6) -> SigmaExtension:
    """Edge signs turning a critical eigenpair of the cut problem into one of ``g``.

    Off the cut the signs of ``g`` are kept; on cut edge ``(u, v)`` the sign
    is ``alpha f_u / f_v`` rounded to +-1, or 1 when ``f_v = 0``.

    alpha = 1 is accepted: the identity |f_v| = |alpha| |f_u| is checked
    directly here, so the certificate does not rely on the slope test that
    degenerates there.
    """
    alpha = _check_alpha(cut, alpha)
    f = np.asarray(f, dtype=float)
    scale = np.max(np.abs(f))
    sigma = np.array(g.sigma, dtype=float)
    raw = np.ones(len(cut))
    for i, ((u, v), a) in enumerate(zip(cut.edges, alpha)):
        gap = abs(abs(f[v]) - abs(a) * abs(f[u]))
        if gap > crit_tol * scale * max(1.0, abs(a)):
            raise NotCriticalError(
                f"not a critical point: ||f_v| - |alpha||f_u|| = {gap:.3e} on "
                f"{g.vertices[u]}-{g.vertices[v]}")
        if abs(f[v]) <= 1e-12 * scale:
            s = 1.0
        else:
            s = a * f[u] / f[v]
        raw[i] = s
        r = 1.0 if s > 0 else -1.0
        if abs(s - r) > sign_tol:
            raise CutError(f"extended sign {s!r} is not +-1 within {sign_tol}")
        sigma[g.edge_index(u, v)] = r
    full = g.replace(sigma=sigma)
    return SigmaExtension(sigma, full, residual(full, lam, f), raw)


def d_alpha_F(g: SignedGraph, cut: CutSpec, alpha, lam, f, i: int) -> np.ndarray:
    """Derivative of F = grad_f L of the cut problem in alpha_i.

    Obtained by differentiating the cut potential; only the two endpoints
    of cut edge ``i`` are nonzero. ``lam`` does not enter but is kept so
    the signature mirrors ``grad_F``.
    """
    alpha = _check_alpha(cut, alpha)
    p = g.p
    a = alpha[i]
    if a == 1 and p < 2:
        raise CutError("F is not differentiable in alpha at alpha = 1 for p < 2")
    u, v = cut.edges[i]
    w = g.weight(u, v)
    f = np.asarray(f, dtype=float)
    out = np.zeros(g.n)
    out[u] = -w * (p - 1) * _abs_pow(1.0 - a, p - 2) * phi_p(p, f[u])
    out[v] = w * (p - 1) * _abs_pow(1.0 - 1.0 / a, p - 2) * phi_p(p, f[v]) / a**2
    return p * out
