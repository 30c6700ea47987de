"""Regularity of cut-triangle eigenpairs: closed form against the Hessian kernel.

For the cut triangle (p = 4, unit signs) an eigenpair is regular exactly
when f_u != f_w and f_v != f_w. With unit weights that fails only at the
three points of the nonregular table.
"""

import numpy as np

from plapcut.catalog import (classify_triangle_cut, nonregular_table,
                             nonregular_triangle_cut_eigenpairs, random_triangle_cut_eigenpairs)

print("nonregular table (omega = 1):")
for lam, alpha, v in nonregular_table():
    print(f"  lambda {lam:10.6f}  alpha {alpha:+.6f}  kernel dim {v.witness.kernel_dim}  "
          f"Hessian rank {v.hessian_rank}  agrees {v.agrees}")

rng = np.random.default_rng(0)
agree = sum(classify_triangle_cut(o, a, lam, f).agrees
            for o, a, lam, f in random_triangle_cut_eigenpairs(300, rng))
print(f"random eigenpairs: {agree}/300 verdicts agree")

omega = (1.3, 0.8, 1.1)
print(f"nonregular points for omega = {omega}:")
for a, lam, f in nonregular_triangle_cut_eigenpairs(omega):
    v = classify_triangle_cut(omega, a, lam, f)
    print(f"  alpha {a:+.6f}  lambda {lam:.6f}  f {np.round(f, 4)}  {v.verdict}, "
          f"kernel dim {v.witness.kernel_dim}")
