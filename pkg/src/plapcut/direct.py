"""Newton iteration on the bordered eigen-system; multistart spectrum search."""

from __future__ import annotations

import numpy as np

from .graph import SignedGraph, normalize, pnorm
from .operator import Eigenpair, HessianUnavailable, grad_F, hessian, phi_p, rayleigh, residual


class NewtonFailure(RuntimeError):
    pass


def _system(g: SignedGraph, lam, f):
    """Bordered residual (F, ||f||^p - 1) and its Jacobian."""
    p = g.p
    rp = g.rho * phi_p(p, f)
    G = np.append(grad_F(g, lam, f), float(np.sum(g.rho * np.abs(f) ** p)) - 1.0)
    n = g.n
    J = np.zeros((n + 1, n + 1))
    J[:n, :n] = hessian(g, lam, f)
    J[:n, n] = -p * rp
    J[n, :n] = p * rp
    return G, J


def newton_solve(g: SignedGraph, lam0: float, f0, max_iter: int = 100,
                 tol: float = 1e-12, polish: int = 0) -> tuple[Eigenpair, int]:
    """Damped Newton for (lam, f) with H f = lam rho phi_p(f), ||f||_p = 1.

    Returns the eigenpair (normalized, sign-canonical) and the number of
    Newton steps taken. After the residual drops below ``tol``, up to
    ``polish`` further steps run while they keep reducing the bordered
    residual; this tightens eigenvectors at nonregular points, where Newton
    is only linearly convergent and the residual is small long before the
    eigenvector is accurate.
    """
    if g.p < 2:
        raise HessianUnavailable("Newton needs p >= 2")
    f = np.asarray(f0, dtype=float)
    if not np.any(f):
        raise NewtonFailure("zero starting vector")
    f = f / pnorm(g, f)
    lam = float(lam0)
    steps = 0
    if polish == 0 and residual(g, lam, f) < tol:
        return Eigenpair(lam, normalize(g, f), residual(g, lam, f)), 0

    G, J = _system(g, lam, f)
    gnorm = np.linalg.norm(G)
    converged = residual(g, lam, f) < tol
    extra = 0
    for _ in range(max_iter + polish):
        try:
            step = np.linalg.solve(J, -G)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -G, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            break
        t = 1.0
        for _ in range(31):
            f_new = f + t * step[:-1]
            lam_new = lam + t * step[-1]
            G_new, J_new = _system(g, lam_new, f_new)
            gn_new = np.linalg.norm(G_new)
            if gn_new < gnorm:
                break
            t *= 0.5
        else:
            break
        f, lam, G, J, gnorm = f_new, lam_new, G_new, J_new, gn_new
        steps += 1
        if converged:
            extra += 1
            if extra >= polish:
                break
        elif residual(g, lam, f / pnorm(g, f)) < tol:
            converged = True
            if polish == 0:
                break
        elif steps >= max_iter:
            break

    if not np.any(f):
        raise NewtonFailure("iterate collapsed to zero")
    fn = f / pnorm(g, f)
    res = residual(g, lam, fn)
    if res >= tol:
        raise NewtonFailure(f"no convergence: residual {res:.3e} after {steps} steps")
    fn = normalize(g, fn)
    return Eigenpair(float(lam), fn, residual(g, lam, fn)), steps


def _same(a: Eigenpair, b: Eigenpair, lam_tol, f_tol) -> bool:
    if abs(a.lam - b.lam) >= lam_tol:
        return False
    return min(np.max(np.abs(a.f - b.f)), np.max(np.abs(a.f + b.f))) < f_tol


def dedupe(pairs, lam_tol: float = 1e-7, f_tol: float = 1e-6) -> list[Eigenpair]:
    out: list[Eigenpair] = []
    for ep in pairs:
        if not any(_same(ep, q, lam_tol, f_tol) for q in out):
            out.append(ep)
    return out


def multistart_spectrum(g: SignedGraph, seeds: int = 200, rng_seed=0,
                        max_iter: int = 100, tol: float = 1e-12,
                        polish: int = 60) -> list[Eigenpair]:
    """Newton from ``seeds`` random unit vectors; deduplicated, sorted by lambda."""
    rng = np.random.default_rng(rng_seed)
    found = []
    for _ in range(seeds):
        f0 = rng.standard_normal(g.n)
        f0 /= pnorm(g, f0)
        try:
            ep, _ = newton_solve(g, rayleigh(g, f0), f0, max_iter=max_iter, tol=tol,
                                  polish=polish)
        except NewtonFailure:
            continue
        found.append(ep)
    found.sort(key=lambda e: (e.lam, tuple(e.f)))
    return dedupe(found)
