"""Two cuts of the triangle with a pendant vertex.

Cutting edge 1-3 leaves a path, cutting 1-2 leaves a star. Both traces
recover most of the spectrum as certified critical values. The value 9
only shows up on the star cut: its eigenvector (1, -1, 0, 0) vanishes at
vertex 3 but not at vertex 1, and no alpha reaches that on edge 1-3.
"""

from plapcut import certified_values, default_alpha_grid, find_critical_points, trace
from plapcut.catalog import pendant_graph, pendant_path_cut, pendant_star_cut

g = pendant_graph()
found = {}
for name, make in (("path", pendant_path_cut), ("star", pendant_star_cut)):
    cut = make(g)
    curves = trace(g, cut, default_alpha_grid())
    found[name] = certified_values(find_critical_points(curves, g, cut))
    print(f"{name:>5} cut: {', '.join(f'{v:.6f}' for v in found[name])}")

extra = [v for v in found["star"] if all(abs(v - w) > 1e-6 for w in found["path"])]
print(f"only on the star cut: {extra}")
