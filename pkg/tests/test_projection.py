"""Matrix calculus: norms, powers, projections, oracles and bounds."""

import numpy as np
import pytest

from multicentric.polynomials import from_roots
from multicentric.projection import (
    block_example,
    block_matrix,
    first_norm_below_one,
    load_matrix_text,
    matrix_from_json,
    matrix_norm2,
    matrix_to_json,
    oracle_projection_contour,
    oracle_projection_eigen,
    poly_apply,
    power_schedule,
    riesz_bound,
    riesz_projection,
    save_matrix_text,
)

RNG = np.random.default_rng(3)
P2 = from_roots([1.0, -1.0])


def random_normal_matrix(eigs, rng):
    """Unitary conjugation of a diagonal: a normal matrix with given spectrum."""
    n = len(eigs)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, _ = np.linalg.qr(X)
    return Q @ np.diag(np.asarray(eigs, dtype=complex)) @ Q.conj().T


def test_poly_apply_diagonal_annihilation():
    A = np.diag([1.0, -1.0]).astype(complex)
    assert np.max(np.abs(poly_apply(P2, A))) < 1e-14


def test_poly_apply_block_closed_form():
    alpha, gamma = 0.7, 2.0
    A = block_matrix(alpha, gamma)
    pa = poly_apply(P2, A)
    c = alpha**2 - 1
    C = np.array([[c, 2 * alpha], [0, c]])
    Y = np.diag([gamma, -gamma])
    want = np.block([[C, Y], [np.zeros((2, 2)), C]])
    assert np.max(np.abs(pa - want)) < 1e-12


def test_poly_apply_identity_polynomial():
    A = RNG.standard_normal((3, 3)) + 1j * RNG.standard_normal((3, 3))
    pa = poly_apply(from_roots([0.0]), A)  # p(z) = z
    assert np.max(np.abs(pa - A)) < 1e-14


def test_poly_apply_commutes():
    A = RNG.standard_normal((5, 5)) + 1j * RNG.standard_normal((5, 5))
    pa = poly_apply(P2, A)
    comm = matrix_norm2(pa @ A - A @ pa)
    assert comm <= 1e-10 * matrix_norm2(A) * max(matrix_norm2(pa), 1)


def test_matrix_norm2_examples():
    assert matrix_norm2(np.diag([3.0, -1.0])) == pytest.approx(3.0, abs=1e-10)
    assert matrix_norm2(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(1.0, abs=1e-10)


def test_matrix_norm2_vs_svd_oracle():
    A = RNG.standard_normal((8, 8)) + 1j * RNG.standard_normal((8, 8))
    assert matrix_norm2(A) == pytest.approx(np.linalg.svd(A, compute_uv=False)[0], abs=1e-8)


def test_power_schedule_normal_case():
    A = np.diag([1.2, -1.2]).astype(complex)
    pt = power_schedule(P2, A)
    assert pt.n == 1
    assert pt.rho == pytest.approx(0.44, abs=1e-10)


def test_power_schedule_weak_coupling_needs_high_power():
    # |alpha^2 - 1| = 0.95: the norm decays like 0.95^n (n+1), below 1 near n~90
    alpha = np.sqrt(2 - 0.05)
    A = block_matrix(alpha, 1.0)
    pt = power_schedule(P2, A)
    assert pt.n == 128
    assert len(pt.steps) == 8
    assert all(not ok for *_, ok in pt.steps[:-1])


def test_power_schedule_boundary_never_terminates():
    A = block_matrix(np.sqrt(2.0), 1.0)  # |alpha^2 - 1| = 1 exactly
    with pytest.raises(RuntimeError):
        power_schedule(P2, A, m_max=6)


def test_riesz_projection_diagonal():
    A = np.diag([0.9, -0.9]).astype(complex)
    rep = riesz_projection(P2, A, n=1, order=60, assignment="indicator-right",
                           resolution=501)
    assert np.max(np.abs(rep.phi_A - np.diag([1.0, 0.0]))) <= 1e-8
    assert rep.diagnostics["idempotency"] <= 1e-10
    assert rep.bound is not None and rep.bound >= 1.0


def test_riesz_projection_block_vs_contour_oracle():
    A = block_matrix(0.5, 1.0)
    rep = riesz_projection(P2, A, assignment="sign", resolution=501)
    S = rep.phi_A
    eye = np.eye(4)
    assert matrix_norm2(S @ S - eye) <= 1e-6
    assert rep.diagnostics["commutation"] <= 1e-6 * matrix_norm2(A)
    P = rep.projector
    oc = oracle_projection_contour(A, 0.5, 0.4)
    assert matrix_norm2(P - oc) <= 1e-5
    assert np.trace(P).real == pytest.approx(2.0, abs=1e-8)


def test_riesz_projection_random_normal():
    w = 0.45 * np.sqrt(RNG.random(6)) * np.exp(2j * np.pi * RNG.random(6))
    eigs = np.where(RNG.random(6) < 0.5, 1, -1) * np.sqrt(1 + w)
    A = random_normal_matrix(eigs, RNG)
    rep = riesz_projection(P2, A, n=1, assignment="indicator-right", resolution=501)
    want = oracle_projection_eigen(A, lambda lam: lam.real > 0)
    assert matrix_norm2(rep.phi_A - want) <= 1e-6


def test_riesz_projection_identity_assignment():
    A = np.diag([0.9, -0.9]).astype(complex)
    rep = riesz_projection(P2, A, n=1, assignment="ones", resolution=401)
    assert np.max(np.abs(rep.phi_A - np.eye(2))) <= 1e-10


def test_riesz_projection_rejects_unseparated():
    A = np.diag([1.9, -1.9]).astype(complex)  # ||p(A)|| = 2.61: one component
    with pytest.raises(ValueError):
        riesz_projection(P2, A, n=1, assignment="sign", resolution=401)


def test_riesz_projection_rejects_nondecaying_tail():
    # constant data dodges the component gate, but ||p(A)^m|| grows without bound
    A = np.diag([1.9, -1.9]).astype(complex)
    with pytest.raises(RuntimeError):
        riesz_projection(P2, A, n=1, assignment="ones", resolution=401)


def test_riesz_projection_explicit_component_map():
    A = np.diag([0.9, -0.9]).astype(complex)
    rep = riesz_projection(P2, A, n=1, assignment={1: 0.0, 2: 1.0}, resolution=401)
    tr = np.trace(rep.phi_A).real
    assert tr == pytest.approx(1.0, abs=1e-8)


def test_riesz_bound_validity_and_n1_reduction():
    A = np.diag([0.9, -0.9]).astype(complex)
    rho = matrix_norm2(poly_apply(P2, A))
    b = riesz_bound(P2, A, 1, rho, sup_phi=1.0)
    assert b >= 1.0  # ||S|| = 1 for the sign data on a normal matrix
    # with n = 1 the power factor collapses to 1
    from multicentric.lemniscate import separation_gap_s, sum_abs_delta
    from multicentric.polynomials import lagrange_basis
    from multicentric.projection import _matrix_poly

    s = separation_gap_s(P2, rho)
    C = sum_abs_delta(P2, rho) * s
    dsum = sum(matrix_norm2(_matrix_poly(lagrange_basis(P2, j), A)) for j in range(2))
    assert b == pytest.approx((1 + C / s) * dsum, rel=1e-10)


def test_riesz_bound_simple_flag_weaker():
    A = block_matrix(0.5, 1.0)
    rho = 0.95
    p4 = from_roots(np.exp(1j * np.pi * np.array([1, 3, 5, 7]) / 4) * 0.999)  # any quartic
    full = riesz_bound(P2, A, 2, rho, C=2.0, s=0.5, sup_phi=1.0)
    # d = 2 means the default exponent d-1 already equals the simple-point one
    simple = riesz_bound(P2, A, 2, rho, C=2.0, s=0.5, sup_phi=1.0, simple_critical=True)
    assert full == pytest.approx(simple)
    # a quartic with s < 1 gives a strictly larger constant without the flag
    full4 = riesz_bound(p4, A, 1, rho, C=2.0, s=0.5, sup_phi=1.0)
    simple4 = riesz_bound(p4, A, 1, rho, C=2.0, s=0.5, sup_phi=1.0, simple_critical=True)
    assert full4 > simple4


def test_oracle_eigen_diag_and_defective():
    A = np.diag([2.0, -3.0]).astype(complex)
    P = oracle_projection_eigen(A, lambda lam: lam.real > 0)
    assert np.max(np.abs(P - np.diag([1.0, 0.0]))) < 1e-12
    with pytest.raises(ValueError):
        oracle_projection_eigen(block_matrix(0.5, 1.0), lambda lam: lam.real > 0)


def test_oracle_eigen_vs_contour_on_random_normal():
    eigs = np.array([1.1, 0.9, 1.0, -0.8, -1.2, -1.0], dtype=complex)
    A = random_normal_matrix(eigs, RNG)
    Pe = oracle_projection_eigen(A, lambda lam: lam.real > 0)
    Pc = oracle_projection_contour(A, 1.0, 0.5)
    assert matrix_norm2(Pe - Pc) < 1e-8


def test_oracle_contour_examples():
    A = np.diag([1.0, -1.0]).astype(complex)
    P = oracle_projection_contour(A, 1.0, 0.5)
    assert np.max(np.abs(P - np.diag([1.0, 0.0]))) < 1e-10

    A4 = block_matrix(0.5, 1.0)
    P4 = oracle_projection_contour(A4, 0.5, 0.4)
    assert matrix_norm2(P4 @ P4 - P4) < 1e-9
    assert np.linalg.matrix_rank(P4, tol=1e-6) == 2
    Pm = oracle_projection_contour(A4, -0.5, 0.4)
    assert matrix_norm2(P4 + Pm - np.eye(4)) < 1e-9


def test_block_example_decoupled_and_nilpotent():
    rep = block_example(0.0, 0.0, 5)
    assert rep["max_entry_error"] < 1e-12
    assert rep["norm"] == pytest.approx(1.0, abs=1e-10)  # p(A)^n = (-1)^n I
    rep = block_example(1.0, 1.0, 2)
    assert rep["max_entry_error"] < 1e-12
    assert rep["norm"] < 1e-12  # C = [[0,2],[0,0]] squares to zero; coupling drops too


def test_block_example_closed_form_various_n():
    for n in [1, 2, 3, 8, 33, 64]:
        rep = block_example(0.8, 2.5, n)
        assert rep["scaled_entry_error"] <= 1e-10


def test_block_first_norm_below_one_exceeds_inverse_eps():
    # |alpha^2 - 1| = 0.9 (eps = 0.1): decay fights the n(n+1)-ish growth
    alpha = np.sqrt(1.9)
    n = first_norm_below_one(alpha, 1.0)
    assert n > 1 / (2 * 0.1)


def test_matrix_io_roundtrip(tmp_path):
    A = RNG.standard_normal((3, 3)) + 1j * RNG.standard_normal((3, 3))
    B = matrix_from_json(matrix_to_json(A))
    assert np.array_equal(A, B)
    path = tmp_path / "m.txt"
    save_matrix_text(A, path)
    C = load_matrix_text(path)
    assert np.max(np.abs(A - C)) < 1e-15
