"""Cut edge uv of the triangle and follow the eigenvalues of the cut operator.

Each curve lambda(alpha) is an eigenvalue of a tree (the path u-w-v with
alpha-dependent potentials on u and v). Its extrema are eigenvalues of the
triangle itself, possibly with the sign of edge uv flipped.

Usage: python3 demos/cut_trace.py [curves.csv]
"""

import sys

from plapcut import curve_report, find_critical_points, linear_alpha_grid, trace
from plapcut.catalog import triangle_cut, triangle_graph

g = triangle_graph()
cut = triangle_cut(g)
curves = trace(g, cut, linear_alpha_grid(-3, 3, 400), lambda_range=(-5, 40))
points = find_critical_points(curves, g, cut)

print(f"{len(curves)} branches, {sum(len(c.samples) for c in curves)} samples")
print(f"{'lambda':>14} {'alpha':>12}  sigma_uv  regular  certified")
for cp in sorted(points, key=lambda c: (c.lam, c.alpha)):
    s = "" if cp.sigma is None else f"{int(cp.sigma[0]):+d}"
    print(f"{cp.lam:14.8f} {cp.alpha:12.8f}  {s:>8}  {str(cp.regularity.is_regular):7}  "
          f"{cp.certified}")

if len(sys.argv) > 1:
    curve_report(curves, points, g, csv_sink=sys.argv[1])
    print(f"curves written to {sys.argv[1]}")
