"""First-order perturbation of eigenpairs with respect to cut parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import CutSpec, GraphError, SignedGraph, pnorm
from .operator import _abs_pow, hessian, phi_p
from .surgery import CutError, _check_alpha, build_cut_operator, d_alpha_F

REGULARITY_TOL = 1e-8


class NonRegularError(ValueError):
    """The reduced Hessian is singular, so the eigenvector derivative is undefined."""


@dataclass(frozen=True)
class RegularityReport:
    kernel_dim: int
    is_regular: bool
    singular_values: tuple[float, ...]
    tolerance_used: float

    def as_dict(self) -> dict:
        return {"kernel_dim": self.kernel_dim, "is_regular": self.is_regular,
                "singular_values": list(self.singular_values),
                "tolerance_used": self.tolerance_used}


def regularity(g: SignedGraph, lam, f, tol: float = REGULARITY_TOL) -> RegularityReport:
    """Numerical kernel dimension of the Hessian of the Lagrangian.

    Singular values below ``tol`` times the largest one count as zero; a
    vanishing Hessian has full kernel.
    """
    s = np.linalg.svd(hessian(g, lam, f), compute_uv=False)
    smax = s[0] if s.size else 0.0
    k = g.n if smax == 0 else int(np.sum(s < tol * smax))
    return RegularityReport(k, k == 1, tuple(float(x) for x in s), tol)


def t_basis(g: SignedGraph, f) -> np.ndarray:
    """Orthonormal basis of the complement of rho*phi_p(f), as columns."""
    f = np.asarray(f, dtype=float)
    v = g.rho * phi_p(g.p, f)
    if not np.any(v):
        raise GraphError("t_basis needs a nonzero vector")
    q, _ = np.linalg.qr(v.reshape(-1, 1), mode="complete")
    return q[:, 1:]


def hf_eigenvalue_derivative(g: SignedGraph, cut: CutSpec, alpha, f, i: int) -> float:
    """d lambda / d alpha_i along the eigenvalue branch through ``f``.

    Closed form (p-1) omega |1-alpha|^(p-2) (|f_v|^p/|alpha|^p - |f_u|^p),
    divided by ||f||_p^p so unnormalized eigenvectors are accepted.
    """
    alpha = _check_alpha(cut, alpha)
    p = g.p
    a = alpha[i]
    if a == 1 and p < 2:
        raise CutError("eigenvalue not differentiable at alpha = 1 for p < 2")
    u, v = cut.edges[i]
    f = np.asarray(f, dtype=float)
    mass = float(np.sum(g.rho * np.abs(f) ** p))
    w = g.weight(u, v)
    return float((p - 1) * w * _abs_pow(1.0 - a, p - 2)
                 * (abs(f[v]) ** p / abs(a) ** p - abs(f[u]) ** p) / mass)


def hf_gradient(g: SignedGraph, cut: CutSpec, alpha, f) -> np.ndarray:
    return np.array([hf_eigenvalue_derivative(g, cut, alpha, f, i)
                     for i in range(len(cut))])


def hf_eigenvector_derivative(g: SignedGraph, cut: CutSpec, alpha, lam, f, i: int,
                              T=None, cond_max: float = 1e12) -> np.ndarray:
    """d f / d alpha_i of the normalized branch through (lam, f).

    Computes -T (T' H T)^{-1} T' D_alpha F on the cut operator. ``f`` is
    rescaled to unit p-norm (sign kept). Raises ``NonRegularError`` when
    the reduced Hessian has condition number above ``cond_max``.
    """
    f = np.asarray(f, dtype=float)
    f = f / pnorm(g, f)
    h = build_cut_operator(g, cut, alpha)
    H = hessian(h, lam, f)
    D = d_alpha_F(g, cut, alpha, lam, f, i)
    if T is None:
        T = t_basis(h, f)
    M = T.T @ H @ T
    if np.linalg.cond(M) > cond_max:
        raise NonRegularError("reduced Hessian is singular; eigenpair not regular")
    return -T @ np.linalg.solve(M, T.T @ D)


def reduced_inverse(g: SignedGraph, lam, f, T=None) -> np.ndarray:
    """T (T' H T)^{-1} T', a reflexive generalized inverse of the Hessian."""
    f = np.asarray(f, dtype=float)
    if T is None:
        T = t_basis(g, f)
    H = hessian(g, lam, f)
    return T @ np.linalg.solve(T.T @ H @ T, T.T)
