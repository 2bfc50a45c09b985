"""Polynomial layer: construction, Lagrange basis, critical points, model family."""

import numpy as np
import pytest

from multicentric.polynomials import (
    SeparationTask,
    critical_points,
    cubic_example,
    from_roots,
    lagrange_basis,
    lagrange_values,
    model_polynomial,
)

EPS = np.pi / 70
RNG = np.random.default_rng(42)


def test_from_roots_quadratic():
    p = from_roots([1.0, -1.0])
    assert np.allclose(p.coeffs_desc, [1, 0, -1])
    assert p.degree == 2 and p.simple_roots


def test_from_roots_quartic_rotated_eighth_roots():
    roots = np.exp(1j * np.pi * np.array([1, 3, 5, 7]) / 4)
    p = from_roots(roots)
    assert np.allclose(p.coeffs_desc, [1, 0, 0, 0, 1], atol=1e-14)


def test_from_roots_perturbed_quartic_formula():
    roots = [np.exp(1j * (np.pi / 4 - EPS)), -np.exp(-1j * (np.pi / 4 - EPS)),
             -np.exp(1j * (np.pi / 4 - EPS)), np.exp(-1j * (np.pi / 4 - EPS))]
    p = from_roots(roots)
    want = [1, 0, -2 * np.sin(2 * EPS), 0, 1]
    assert np.allclose(p.coeffs_desc, want, atol=1e-14)


def test_from_roots_rejects_empty():
    with pytest.raises(ValueError):
        from_roots([])


def test_product_and_coefficient_forms_agree():
    roots = RNG.standard_normal(5) + 1j * RNG.standard_normal(5)
    p = from_roots(roots)
    z = 2.0 * np.exp(2j * np.pi * RNG.random(16))
    a = p(z)
    b = p.evaluate_product(z)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-12


def test_evaluate_examples():
    p = from_roots([1.0, -1.0])
    assert p(0.0) == pytest.approx(-1.0)
    p4 = from_roots(np.exp(1j * np.pi * np.array([1, 3, 5, 7]) / 4))
    assert abs(p4((1 + 1j) / np.sqrt(2))) <= 1e-14


def test_evaluate_perturbed_quartic_matches_small_eps_expansion():
    # on the real axis p_eps(t) = t^4 - 4 t^2 eps + 1 + o(eps^2); check t = 1
    eps = 0.01
    p = model_polynomial(4, eps)
    exact = abs(p(1.0))
    approx = 1.0 - 4.0 * eps + 1.0
    assert exact == pytest.approx(approx, abs=2e-4)
    # on the imaginary axis the quadratic term flips sign
    assert abs(p(1j)) == pytest.approx(1.0 + 4.0 * eps + 1.0, abs=2e-4)


def test_derivative():
    p = from_roots([1.0, -1.0])
    assert np.allclose(p.derivative(), [2, 0])
    p4 = from_roots(np.exp(1j * np.pi * np.array([1, 3, 5, 7]) / 4))
    assert np.allclose(p4.derivative(), [4, 0, 0, 0], atol=1e-14)
    pe = model_polynomial(4, EPS)
    assert np.allclose(pe.derivative(), [4, 0, -4 * np.sin(2 * EPS), 0], atol=1e-13)


def test_critical_points_simple_and_multiple():
    p = from_roots([1.0, -1.0])
    [(z, m)] = critical_points(p)
    assert abs(z) < 1e-12 and m == 1

    p4 = from_roots(np.exp(1j * np.pi * np.array([1, 3, 5, 7]) / 4))
    [(z, m)] = critical_points(p4)
    assert abs(z) < 1e-7 and m == 3


def test_critical_points_perturbed_quartic():
    pe = model_polynomial(4, np.pi / 70)
    pts = sorted(critical_points(pe), key=lambda t: t[0].real)
    want = np.sqrt(np.sin(2 * np.pi / 70))
    assert len(pts) == 3
    assert pts[0][0] == pytest.approx(-want, abs=1e-9)
    assert abs(pts[1][0]) < 1e-9
    assert pts[2][0] == pytest.approx(want, abs=1e-9)


def test_gauss_lucas_hull_membership():
    # every critical point lies in the convex hull of the roots
    from scipy.spatial import ConvexHull

    for _ in range(10):
        roots = RNG.standard_normal(6) + 1j * RNG.standard_normal(6)
        p = from_roots(roots)
        pts = np.column_stack([roots.real, roots.imag])
        hull = ConvexHull(pts)
        eqs = hull.equations  # Ax + b <= 0 inside
        for zc, _ in critical_points(p):
            dist = np.max(eqs[:, :2] @ [zc.real, zc.imag] + eqs[:, 2])
            assert dist <= 1e-7


def test_lagrange_quadratic_closed_form():
    p = from_roots([1.0, -1.0])
    assert np.allclose(lagrange_basis(p, 0), [0.5, 0.5], atol=1e-12)   # (1+z)/2
    assert np.allclose(lagrange_basis(p, 1), [-0.5, 0.5], atol=1e-12)  # (1-z)/2


def test_lagrange_quartic_closed_form():
    lam = np.array([(1 + 1j), (-1 + 1j), (-1 - 1j), (1 - 1j)]) / np.sqrt(2)
    p = from_roots(lam)
    s2 = np.sqrt(2)
    want = np.array([(-1 - 1j), -1j * s2, (1 - 1j), s2]) / (4 * s2)  # descending
    assert np.allclose(lagrange_basis(p, 0), want, atol=1e-12)


def test_lagrange_kronecker_and_partition_of_unity():
    roots = RNG.standard_normal(4) + 1j * RNG.standard_normal(4)
    p = from_roots(roots)
    vals = lagrange_values(p, roots)
    assert np.max(np.abs(vals - np.eye(4))) < 1e-10
    z = 2 * (RNG.random(100) - 0.5) + 2j * (RNG.random(100) - 0.5)
    assert np.max(np.abs(np.sum(lagrange_values(p, z), axis=0) - 1)) < 1e-10


def test_lagrange_rejects_repeated_roots():
    p = from_roots([1.0, 1.0 + 1e-12])
    with pytest.raises(ValueError):
        lagrange_basis(p, 0)


def test_model_polynomial_quadratic_unchanged():
    p = model_polynomial(2, 0.3)
    assert np.allclose(sorted(p.roots.real), [-1, 1], atol=1e-14)


def test_model_polynomial_quartic():
    p = model_polynomial(4, EPS)
    want = [1, 0, -2 * np.sin(2 * EPS), 0, 1]
    assert np.allclose(p.coeffs_desc, want, atol=1e-13)


def test_model_polynomial_sextic():
    th = np.pi / 3 - EPS
    quartic = np.array([1, 0, -2 * np.cos(2 * th), 0, 1])
    want = np.convolve([1, 0, -1], quartic)
    p = model_polynomial(6, EPS)
    assert np.allclose(p.coeffs_desc, want, atol=1e-13)


@pytest.mark.parametrize("d", [4, 6, 8, 10, 12, 14])
def test_model_polynomial_real_coefficients(d):
    p = model_polynomial(d, EPS)
    assert np.max(np.abs(p.coeffs_desc.imag)) <= 1e-12


def test_model_polynomial_quartic_axis_floor():
    # |p(iy)|^2 = y^4 + 2 sin(2 eps) y^2 + 1 >= 1 on a sampled grid
    p = model_polynomial(4, EPS)
    y = np.linspace(-3, 3, 2001)
    assert np.min(np.abs(p(1j * y))) >= 1.0 - 1e-12


def test_model_polynomial_validation():
    with pytest.raises(ValueError):
        model_polynomial(5, EPS)
    with pytest.raises(ValueError):
        model_polynomial(4, np.pi / 4)
    with pytest.raises(ValueError):
        model_polynomial(4, EPS, style="bogus")


def test_model_polynomial_uniform_style():
    # rigid rotation of the quadruple: same moduli, conjugation symmetry lost
    p = model_polynomial(8, EPS, style="uniform")
    assert np.max(np.abs(np.abs(p.roots) - 1)) < 1e-12
    assert np.max(np.abs(p.coeffs_desc.imag)) > 1e-6


def test_cubic_example():
    p = cubic_example(EPS)
    assert p.degree == 3
    assert np.min(np.abs(p.roots - 1.0)) < 1e-14
    th = 2 * np.pi / 3 + EPS
    assert np.min(np.abs(p.roots - np.exp(1j * th))) < 1e-14


def test_separation_task():
    t = SeparationTask(np.radians(20))
    segs = t.sample(101)
    assert len(segs) == 2
    assert np.max(np.abs(segs[1].real - 1.0)) < 1e-14
    assert np.max(segs[1].imag) == pytest.approx(np.tan(np.radians(20)))
    with pytest.raises(ValueError):
        SeparationTask(np.pi / 2)
