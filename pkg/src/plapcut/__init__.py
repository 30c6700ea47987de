"""Eigenpairs of the signed p-Schroedinger operator on graphs, their
Hellmann-Feynman derivatives, and edge-cut surgery."""

from .continuation import (CriticalPoint, EigCurve, certified_values, curve_report,
                           default_alpha_grid, find_critical_points, linear_alpha_grid, trace)
from .direct import NewtonFailure, multistart_spectrum, newton_solve
from .graph import (CutSpec, GraphError, SignedGraph, dump_graph, load_graph, make_cut,
                    make_graph, normalize, pnorm)
from .operator import (Eigenpair, HessianUnavailable, apply_operator, grad_F, hessian,
                       lagrangian, phi_p, phi_p_inverse, residual)
from .perturbation import (NonRegularError, RegularityReport, hf_eigenvalue_derivative,
                           hf_eigenvector_derivative, hf_gradient, regularity, t_basis)
from .surgery import (CutError, NotCriticalError, build_cut_operator, d_alpha_F,
                      extend_sigma, reconstruct_alpha)
from .tree import NotATreeError, secular, tree_spectrum
