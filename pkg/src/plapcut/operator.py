"""The signed p-Schroedinger operator, its Lagrangian, gradient and Hessian."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graph import SignedGraph

# |f_u - sigma f_v| below this makes the 2 <= p < 3 Hessian ill-conditioned
KINK_TOL = 1e-8


class HessianUnavailable(ValueError):
    """The Hessian of the Lagrangian does not exist for p < 2."""


class ConditioningWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Eigenpair:
    lam: float
    f: np.ndarray
    residual: float

    def as_dict(self) -> dict:
        return {"lambda": float(self.lam), "f": [float(x) for x in self.f],
                "residual": float(self.residual)}


def phi_p(p, x):
    """Signed power |x|^(p-2) x, with phi_p(0) = 0."""
    x = np.asarray(x, dtype=float)
    out = np.abs(x) ** (p - 1) * np.sign(x)
    return out if out.ndim else float(out)


def phi_p_inverse(p, y):
    """Inverse of ``phi_p``; equals phi_q with q = p/(p-1)."""
    return phi_p(p / (p - 1.0), y)


def _abs_pow(x, e):
    """|x|**e with |0|**0 = 1, elementwise."""
    x = np.abs(np.asarray(x, dtype=float))
    if e == 0:
        return np.ones_like(x)
    return x ** e


def _edge_arrays(g: SignedGraph):
    if not g.edges:
        z = np.zeros(0, dtype=int)
        return z, z
    e = np.asarray(g.edges, dtype=int)
    return e[:, 0], e[:, 1]


def apply_operator(g: SignedGraph, f) -> np.ndarray:
    """(H f)(u) = sum_v omega phi_p(f_u - sigma f_v) + kappa_u phi_p(f_u)."""
    f = np.asarray(f, dtype=float)
    a, b = _edge_arrays(g)
    out = g.kappa * phi_p(g.p, f)
    da = phi_p(g.p, f[a] - g.sigma * f[b]) * g.omega
    db = phi_p(g.p, f[b] - g.sigma * f[a]) * g.omega
    np.add.at(out, a, da)
    np.add.at(out, b, db)
    return out


def energy(g: SignedGraph, f) -> float:
    """The p-form: sum over undirected edges of omega|f_u - sigma f_v|^p plus sum kappa|f|^p."""
    f = np.asarray(f, dtype=float)
    a, b = _edge_arrays(g)
    return float(np.sum(g.omega * np.abs(f[a] - g.sigma * f[b]) ** g.p)
                 + np.sum(g.kappa * np.abs(f) ** g.p))


def lagrangian(g: SignedGraph, lam, f, energy_only: bool = False) -> float:
    f = np.asarray(f, dtype=float)
    e = energy(g, f)
    if energy_only:
        return e
    return e - lam * (float(np.sum(g.rho * np.abs(f) ** g.p)) - 1.0)


def grad_F(g: SignedGraph, lam, f) -> np.ndarray:
    """Gradient of the Lagrangian in f: p (H f - lam rho phi_p(f))."""
    f = np.asarray(f, dtype=float)
    return g.p * (apply_operator(g, f) - lam * g.rho * phi_p(g.p, f))


def hessian(g: SignedGraph, lam, f) -> np.ndarray:
    """Hessian of the Lagrangian with respect to f.

    Uses |0|^(p-2) = 1 at p = 2 and 0 for p > 2. Raises
    ``HessianUnavailable`` for p < 2 and warns when 2 < p < 3 and some edge
    difference is within ``KINK_TOL`` of zero.
    """
    p = g.p
    if p < 2:
        raise HessianUnavailable(f"Hessian may not exist for p={p} < 2")
    f = np.asarray(f, dtype=float)
    n = g.n
    a, b = _edge_arrays(g)
    d = f[a] - g.sigma * f[b]
    if 2 < p < 3 and np.any(np.abs(d) < KINK_TOL):
        warnings.warn("edge difference near zero; Hessian ill-conditioned for p < 3",
                      ConditioningWarning, stacklevel=2)
    w = g.omega * _abs_pow(d, p - 2)
    H = np.zeros((n, n))
    diag = (g.kappa - lam * g.rho) * _abs_pow(f, p - 2)
    np.add.at(diag, a, w)
    np.add.at(diag, b, w)
    H[np.arange(n), np.arange(n)] = diag
    off = -g.sigma * w
    H[a, b] = off
    H[b, a] = off
    return p * (p - 1) * H


def residual(g: SignedGraph, lam, f) -> float:
    """Max-norm of H f - lam rho phi_p(f)."""
    f = np.asarray(f, dtype=float)
    r = apply_operator(g, f) - lam * g.rho * phi_p(g.p, f)
    return float(np.max(np.abs(r))) if r.size else 0.0


def rayleigh(g: SignedGraph, f) -> float:
    """energy(f) / ||f||_p^p."""
    f = np.asarray(f, dtype=float)
    return energy(g, f) / float(np.sum(g.rho * np.abs(f) ** g.p))
