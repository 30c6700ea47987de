"""Eigenpairs of the p = 4 triangle found by multistart Newton.

Three distinct eigenvalues: 0 with the constant vector, 9 with
vectors like (1, -1, 0), and (1 + 2^(1/3))^3 with vectors like
(1, 1, -2^(1/3)).
"""

import numpy as np

from plapcut import multistart_spectrum
from plapcut.catalog import triangle_graph

g = triangle_graph()
pairs = multistart_spectrum(g, seeds=200, rng_seed=0)

print(f"{'lambda':>14}  f / max|f|")
for ep in pairs:
    f = np.round(ep.f / np.max(np.abs(ep.f)), 6) + 0.0  # easier to read than unit 4-norm
    print(f"{ep.lam + 0.0:14.10f}  {f}")

# a weighted triangle: with omega_uw = omega_uv = 1 the vector (0, 1, -1)
# is an eigenvector whatever omega_vw is, with eigenvalue 1 + 8 omega_vw
g2 = triangle_graph(omega=(1.0, 1.0, 0.9))
hit = [e for e in multistart_spectrum(g2, 200, 0) if abs(e.lam - 8.2) < 1e-8]
print(f"\nomega_vw = 0.9: lambda = {hit[0].lam:.12f}, f = {np.round(hit[0].f, 6) + 0.0}")
