import numpy as np
import pytest

from plapcut.catalog import (CBRT2, NONREGULAR_TABLE, TRIANGLE_TOP, NotAnEigenpairError,
                             classify_triangle_cut, nonregular_table,
                             nonregular_triangle_cut_eigenpairs, random_triangle_cut_eigenpairs,
                             triangle_cut, triangle_graph)
from plapcut.continuation import linear_alpha_grid, trace


def test_table_rows():
    rows = nonregular_table()
    assert len(rows) == 3
    for lam, alpha, v in rows:
        assert v.residual < 1e-10
        assert not v.regular and v.agrees
    assert [v.witness.kernel_dim for *_, v in rows] == [3, 2, 2]
    assert [v.hessian_rank for *_, v in rows] == [0, 1, 1]


def test_top_value():
    assert TRIANGLE_TOP == pytest.approx((1 + 2 ** (1 / 3)) ** 3, rel=1e-15)
    assert TRIANGLE_TOP == pytest.approx(11.541966305589218, abs=1e-12)


def test_regular_example():
    # symmetric point of the unit triangle: f = (1, -1, 0) at alpha = -1
    v = classify_triangle_cut((1, 1, 1), -1.0, 9.0, [1.0, -1.0, 0.0])
    assert v.regular and v.agrees and v.verdict == "regular"
    assert v.witness.kernel_dim == 1


def test_not_an_eigenpair():
    with pytest.raises(NotAnEigenpairError):
        classify_triangle_cut((1, 1, 1), -1.0, 8.0, [1.0, -1.0, 0.0])


def test_generated_nonregular_points_unit_weights():
    found = nonregular_triangle_cut_eigenpairs((1, 1, 1))
    alphas = sorted(a for a, _, _ in found)
    assert alphas == [pytest.approx(-CBRT2, abs=1e-12), pytest.approx(-1 / CBRT2, abs=1e-12)]
    for a, lam, f in found:
        assert lam == pytest.approx(TRIANGLE_TOP, abs=1e-9)


def test_agreement_on_mixed_sample():
    """10^3 eigenpairs, random and constructed nonregular, all agree."""
    rng = np.random.default_rng(7)
    samples = list(random_triangle_cut_eigenpairs(900, rng))
    while len(samples) < 1000:
        omega = tuple(rng.uniform(0.5, 2.0, 3))
        for a, lam, f in nonregular_triangle_cut_eigenpairs(omega, grid=1001):
            samples.append((omega, a, lam, f))
    samples = samples[:1000]
    n_nonregular = 0
    for omega, a, lam, f in samples:
        v = classify_triangle_cut(omega, a, lam, f, res_tol=1e-7 * max(1.0, lam))
        assert v.agrees, (omega, a, lam, f)
        n_nonregular += not v.regular
    assert n_nonregular >= 50


def test_no_other_nonregular_points_on_unit_curves():
    g = triangle_graph()
    curves = trace(g, triangle_cut(g), linear_alpha_grid(-3, 3, 200), (-5, 40))
    hits = []
    for c in curves:
        for s in c.samples:
            f = s.f / np.max(np.abs(s.f))
            if min(abs(f[0] - f[2]), abs(f[1] - f[2])) < 1e-3:
                hits.append((s.alpha, s.lam))
    table = [(alpha, lam) for lam, _, alpha in NONREGULAR_TABLE]
    for a, lam in hits:
        assert any(abs(a - ta) < 0.05 and abs(lam - tl) < 0.5 for ta, tl in table), (a, lam)
