import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valentiner.errors import Inconsistent, NotDivisible, RankDeficient
from valentiner.hpoly import (EquivariantMap, HPoly, bordered_hessian_det, grad_cross,
                              hessian_det, jacobian_det, poly_divide_exact)
from valentiner.linsolve import solve_linear


def _random_poly(rng, degree):
    from valentiner.hpoly import n_monomials

    return HPoly(degree, rng.standard_normal(n_monomials(degree))
                 + 1j * rng.standard_normal(n_monomials(degree)))


def test_eval_homogeneity(rng):
    p = _random_poly(rng, 7)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    lam = 0.7 - 0.3j
    assert abs(p.eval(lam * x) - lam ** 7 * p.eval(x)) < 1e-10 * abs(p.eval(x))


def test_compose_identity_and_roundtrip(rng):
    p = _random_poly(rng, 5)
    eye = np.eye(3)
    assert np.allclose(p.compose_linear(eye).coeffs, p.coeffs)
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q = p.compose_linear(m).compose_linear(np.linalg.inv(m))
    assert np.max(np.abs(q.coeffs - p.coeffs)) < 1e-10 * p.supnorm()


def test_hessian_of_round_quadric():
    p = HPoly.from_terms(2, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})
    h = hessian_det(p)
    assert h.degree == 0
    assert abs(h.coeffs[0] - 8.0) < 1e-14


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_euler_identity(deg, seed):
    rng = np.random.default_rng(seed)
    p = _random_poly(rng, deg)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    lhs = sum(x[i] * p.diff(i).eval(x) for i in range(3))
    assert abs(lhs - deg * p.eval(x)) < 1e-10 * max(1.0, abs(p.eval(x)))


def test_hessian_compose_rule(rng):
    p = _random_poly(rng, 4)
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    lhs = hessian_det(p.compose_linear(m))
    rhs = hessian_det(p).compose_linear(m).scale(np.linalg.det(m) ** 2)
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-8 * lhs.supnorm()


def test_jacobian_compose_rule(rng):
    p, q, r = (_random_poly(rng, d) for d in (3, 4, 5))
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    lhs = jacobian_det(*(f.compose_linear(m) for f in (p, q, r)))
    rhs = jacobian_det(p, q, r).compose_linear(m).scale(np.linalg.det(m))
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-8 * lhs.supnorm()


def test_grad_cross_degrees(inv):
    assert grad_cross(inv.F, inv.Phi).degree == 16
    assert grad_cross(inv.F, inv.Psi).degree == 34
    assert grad_cross(inv.Phi, inv.Psi).degree == 40


def test_grad_cross_orthogonality(rng, inv):
    # the cross map is orthogonal to both gradient factors (so its image
    # point lies on both polar lines); orthogonality to x itself does not
    # hold and is not claimed
    g = grad_cross(inv.F, inv.Phi)
    for _ in range(100):
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        v = np.array([c.eval(x) for c in g.components])
        gf = np.array([inv.F.diff(i).eval(x) for i in range(3)])
        gp = np.array([inv.Phi.diff(i).eval(x) for i in range(3)])
        scale = np.linalg.norm(v)
        assert abs(gf @ v) < 1e-10 * scale * np.linalg.norm(gf)
        assert abs(gp @ v) < 1e-10 * scale * np.linalg.norm(gp)


def test_grad_cross_of_parallel_gradients(rng):
    p = _random_poly(rng, 4)
    g = grad_cross(p, p)
    assert all(c.supnorm() < 1e-12 * p.supnorm() ** 2 for c in g.components)


def test_divide_simple():
    n = HPoly.from_terms(3, {(2, 1, 0): 1.0})
    d = HPoly.from_terms(1, {(1, 0, 0): 1.0})
    q = poly_divide_exact(n, d)
    assert abs(q.coeffs[q.terms() and 0] - 0) >= 0  # shape only
    assert q.terms() == {(1, 1, 0): 1.0}


def test_divide_roundtrip(rng):
    q = _random_poly(rng, 6)
    d = _random_poly(rng, 5)
    n = q * d
    q2 = poly_divide_exact(n, d, rel_tol=1e-9)
    assert np.max(np.abs(q2.coeffs - q.coeffs)) < 1e-9 * q.supnorm()


def test_divide_not_divisible(rng):
    n = _random_poly(rng, 6)
    d = _random_poly(rng, 5)
    with pytest.raises(NotDivisible):
        poly_divide_exact(n, d, rel_tol=1e-8)


def test_bordered_hessian_degree(inv):
    bh = bordered_hessian_det(inv.F, inv.Phi)
    assert bh.degree == 30


def test_json_roundtrip(rng):
    p = _random_poly(rng, 3)
    q = HPoly.from_json_dict(p.to_json_dict())
    assert np.allclose(p.coeffs, q.coeffs)
    m = EquivariantMap([_random_poly(rng, 2) for _ in range(3)])
    m2 = EquivariantMap.from_json_dict(m.to_json_dict())
    for a, b in zip(m.components, m2.components):
        assert np.allclose(a.coeffs, b.coeffs)


# --- solve_linear --------------------------------------------------------------


def test_solve_identity(rng):
    b = rng.standard_normal(4)
    x, res = solve_linear(np.eye(4), b)
    assert np.allclose(x, b)


def test_solve_duplicated_rows(rng):
    a = rng.standard_normal((3, 3))
    b = rng.standard_normal(3)
    x0, _ = solve_linear(a, b)
    a2 = np.concatenate([a, a], axis=0)
    b2 = np.concatenate([b, b])
    x1, _ = solve_linear(a2, b2)
    assert np.allclose(x0, x1)


def test_solve_vandermonde_quadratic(rng):
    # independent oracle: construct a known quadratic, sample, refit
    coeffs = np.array([2.0, -1.5, 0.25])
    ts = np.linspace(-1, 1, 5)
    a = np.vander(ts, 3, increasing=True)
    b = a @ coeffs
    x, res = solve_linear(a, b)
    assert np.allclose(x, coeffs, atol=1e-12)
    assert res < 1e-12


def test_solve_errors(rng):
    with pytest.raises(RankDeficient):
        solve_linear(np.zeros((4, 3)), np.zeros(4))
    a = rng.standard_normal((5, 2))
    b = rng.standard_normal(5)
    with pytest.raises(Inconsistent):
        solve_linear(a, b, rel_tol=1e-12)


def test_wellconditioned_residual(rng):
    for _ in range(20):
        a = rng.standard_normal((6, 6)) + np.eye(6) * 3
        b = rng.standard_normal(6)
        x, rel = solve_linear(a, b)
        assert rel < 1e-10
