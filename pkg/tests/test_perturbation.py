import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plapcut.catalog import pendant_graph, pendant_path_cut, triangle_cut, triangle_graph
from plapcut.direct import multistart_spectrum
from plapcut.graph import make_cut, make_graph, normalize
from plapcut.operator import HessianUnavailable, hessian, phi_p
from plapcut.perturbation import (NonRegularError, hf_eigenvalue_derivative,
                                  hf_eigenvector_derivative, hf_gradient, reduced_inverse,
                                  regularity, t_basis)
from plapcut.surgery import build_cut_operator, d_alpha_F, reconstruct_alpha
from plapcut.tree import tree_spectrum

from _util import follow, linear_matrix, random_graph

seeds = st.integers(0, 2**32 - 1)


def test_regularity_examples():
    g = triangle_graph()
    rep = regularity(g, 9.0, normalize(g, [1, -1, 0]))
    assert rep.kernel_dim == 1 and rep.is_regular
    rep = regularity(g, 0.0, normalize(g, [1, 1, 1]))
    assert rep.kernel_dim == 3 and not rep.is_regular
    assert max(rep.singular_values) == 0.0
    g2 = triangle_graph(p=2.0)
    rep = regularity(g2, 3.0, normalize(g2, [1, -1, 0]))
    assert rep.kernel_dim == 2 and not rep.is_regular
    assert rep.tolerance_used == 1e-8


def test_regularity_needs_hessian():
    g = triangle_graph(p=1.5)
    with pytest.raises(HessianUnavailable):
        regularity(g, 1.0, [1, 0, 0])


def test_regular_kernel_is_spanned_by_f():
    g = triangle_graph()
    f = normalize(g, [1, -1, 0])
    _, s, vt = np.linalg.svd(hessian(g, 9.0, f))
    k = vt[-1]
    assert abs(abs(np.dot(k, f)) / np.linalg.norm(f) - 1) < 1e-12


def test_t_basis_examples():
    g = make_graph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")], 4.0)
    T = t_basis(g, [2.0, 0, 0, 0])
    assert T.shape == (4, 3)
    np.testing.assert_allclose(T[0], 0, atol=1e-15)
    assert np.linalg.matrix_rank(T[1:]) == 3


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_t_basis_properties(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    f = normalize(g, rng.standard_normal(g.n))
    T = t_basis(g, f)
    v = g.rho * phi_p(g.p, f)
    assert T.shape == (g.n, g.n - 1)
    assert np.max(np.abs(T.T @ v)) < 1e-12
    assert np.linalg.matrix_rank(T) == g.n - 1
    assert np.dot(f, v) == pytest.approx(1.0, rel=1e-12)
    # f is not in the range of T
    coef = np.linalg.lstsq(T, f, rcond=None)[0]
    assert np.linalg.norm(T @ coef - f) > 0.1


def test_hf_eigenvalue_derivative_at_triangle_critical_point():
    g = triangle_graph()
    cut = triangle_cut(g)
    assert hf_eigenvalue_derivative(g, cut, -1.0, [1, -1, 0], 0) == 0.0
    np.testing.assert_array_equal(hf_gradient(g, cut, [-1.0], [1, -1, 0]), [0.0])


def test_hf_vanishes_under_cut_edge_identity():
    rng = np.random.default_rng(3)
    g = triangle_graph()
    cut = triangle_cut(g)
    for _ in range(50):
        a = rng.uniform(-3, 3)
        fu, fw = rng.standard_normal(2)
        f = [fu, a * fu * rng.choice([-1, 1]), fw]
        assert abs(hf_eigenvalue_derivative(g, cut, a, f, 0)) < 1e-12


def test_hf_rejects_alpha_zero():
    g = triangle_graph()
    with pytest.raises(ValueError):
        hf_eigenvalue_derivative(g, triangle_cut(g), 0.0, [1, 1, 1], 0)


def test_hf_matches_branch_differences_on_triangle():
    g = triangle_graph()
    cut = triangle_cut(g)
    a, h = -0.5, 1e-5
    pairs = tree_spectrum(build_cut_operator(g, cut, a))
    assert len(pairs) >= 3
    for ep in pairs:
        lp, _ = follow(g, cut, a + h, ep.lam, ep.f)
        lm, _ = follow(g, cut, a - h, ep.lam, ep.f)
        fd = (lp - lm) / (2 * h)
        hf = hf_eigenvalue_derivative(g, cut, a, ep.f, 0)
        assert abs(hf - fd) <= 1e-6 * max(1.0, abs(hf))


def test_hf_unnormalized_input():
    g = triangle_graph()
    cut = triangle_cut(g)
    ep = tree_spectrum(build_cut_operator(g, cut, 0.4))[-1]
    d = hf_eigenvalue_derivative(g, cut, 0.4, ep.f, 0)
    assert hf_eigenvalue_derivative(g, cut, 0.4, 3.7 * ep.f, 0) == pytest.approx(d, rel=1e-12)


def test_hf_gradient_is_zero_at_pendant_critical_alpha():
    g = pendant_graph()
    cut = pendant_path_cut(g)
    for ep in multistart_spectrum(g, 60, 0):
        f = ep.f
        if (abs(f[0]) < 1e-9) != (abs(f[2]) < 1e-9):
            continue  # dichotomy fails on the cut edge
        alpha = reconstruct_alpha(g, cut, f)
        assert np.max(np.abs(hf_gradient(g, cut, alpha, f))) < 1e-9


def test_eigenvector_derivative_independent_of_basis():
    g = triangle_graph()
    cut = triangle_cut(g)
    a = -0.5
    for ep in tree_spectrum(build_cut_operator(g, cut, a)):
        T1 = t_basis(g, ep.f)
        q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((2, 2)))
        T2 = T1 @ q
        d1 = hf_eigenvector_derivative(g, cut, a, ep.lam, ep.f, 0, T=T1)
        d2 = hf_eigenvector_derivative(g, cut, a, ep.lam, ep.f, 0, T=T2)
        np.testing.assert_allclose(d1, d2, atol=1e-10)
        # lies in Ran(T)
        assert np.linalg.norm(d1 - T1 @ (T1.T @ d1)) < 1e-10


def test_eigenvector_derivative_matches_branch_differences():
    g = triangle_graph()
    cut = triangle_cut(g)
    a, h = -0.5, 1e-5
    for ep in tree_spectrum(build_cut_operator(g, cut, a)):
        _, fp = follow(g, cut, a + h, ep.lam, ep.f)
        _, fm = follow(g, cut, a - h, ep.lam, ep.f)
        fd = (fp - fm) / (2 * h)
        d = hf_eigenvector_derivative(g, cut, a, ep.lam, ep.f, 0)
        assert np.max(np.abs(d - fd)) < 1e-4


def test_eigenvector_derivative_rejects_nonregular():
    g = triangle_graph()
    cut = triangle_cut(g)
    with pytest.raises(NonRegularError):
        hf_eigenvector_derivative(g, cut, 1.0, 0.0, [1, 1, 1], 0)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_p2_reduced_inverse_is_pseudoinverse(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n=int(rng.integers(3, 6)), p=2.0, extra=0.8, rho=False)
    k = int(rng.integers(len(g.edges)))
    u, v = g.edges[k]
    cut = make_cut(g, [(u, v)])
    a = float(rng.choice([-1, 1]) * rng.uniform(0.2, 3.0))
    h = build_cut_operator(g, cut, a)
    lams, vecs = np.linalg.eigh(linear_matrix(h))
    j = int(rng.integers(g.n))
    gaps = np.abs(np.delete(lams, j) - lams[j])
    if gaps.min() < 1e-6:
        return  # only simple eigenvalues are regular at p = 2
    lam, f = lams[j], normalize(h, vecs[:, j])
    D = d_alpha_F(g, cut, a, lam, f, 0)
    H = hessian(h, lam, f)
    Hp = np.linalg.pinv(H, rcond=1e-10, hermitian=True)
    want = -Hp @ D
    got = hf_eigenvector_derivative(g, cut, a, lam, f, 0)
    np.testing.assert_allclose(got, want, atol=1e-9 * max(1.0, np.max(np.abs(want))))
    np.testing.assert_allclose(reduced_inverse(h, lam, f), Hp, atol=1e-9 * max(1.0, np.max(np.abs(Hp))))
