"""Matrix functional calculus and Riesz spectral projections.

phi(A) is assembled without any contour integration: with B = p(A)^n and
the folded branch series f_{j,k},

    phi(A) = sum_j delta_j(A) sum_k p(A)^k f_{j,k}(B),

valid as soon as the operator sublevel set {z : |p(z)|^n <= ||B||} splits
into components and phi is constant on each.  Two classical oracles
(eigendecomposition, resolvent quadrature) are kept alongside for
validation, and the norm bound driven by the lemniscate constants C and
s is computed with every report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lemniscate import (
    GridSpec,
    separates_imaginary_axis,
    separation_gap_s,
    sublevel_components,
    sum_abs_delta,
)
from .polynomials import MonicPolynomial, from_roots, lagrange_basis
from .powerseries import JetSpec, fj_interpolation
from .unityfold import fold_multicentric

ORDER_CAP = 512  # hard cap on n * (series order in w)


def poly_apply(p: MonicPolynomial, A: np.ndarray) -> np.ndarray:
    """Horner evaluation of p at a square matrix."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    eye = np.eye(len(A), dtype=complex)
    B = np.zeros_like(A)
    for c in p.coeffs_desc:
        B = B @ A + c * eye
    return B


def matrix_norm2(A: np.ndarray, tol: float = 1e-10, restarts: int = 5,
                 max_iter: int = 5000) -> float:
    """Spectral norm by power iteration on A^H A with random restarts."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0.0
    rng = np.random.default_rng(12345)
    H = A.conj().T @ A
    best = 0.0
    for _ in range(restarts):
        v = rng.standard_normal(len(H)) + 1j * rng.standard_normal(len(H))
        v /= np.linalg.norm(v)
        prev = 0.0
        for _ in range(max_iter):
            v = H @ v
            lam = np.linalg.norm(v)
            if lam == 0.0:
                break
            v /= lam
            if abs(lam - prev) <= tol * max(lam, 1e-300):
                break
            prev = lam
        best = max(best, lam)
    return float(np.sqrt(best))


def commutator_norm(A, B):
    return matrix_norm2(A @ B - B @ A)


@dataclass(frozen=True)
class PowerTrace:
    """Doubling trace of n -> ||p(A)^n||^(1/n) with the separation verdict."""

    steps: list  # (n, rho_n, separated)
    n: int
    rho: float


def power_schedule(p: MonicPolynomial, A: np.ndarray, m_max: int = 10,
                   resolution: int = 501) -> PowerTrace:
    """Smallest n = 2^m whose level rho_n separates the operator lemniscate.

    Repeated squaring of p(A); at each stage the sublevel set at
    rho_n = ||p(A)^n||^(1/n) must have at least two components and avoid
    the imaginary axis.
    """
    B = poly_apply(p, A)
    steps = []
    Bn = B
    n = 1
    for m in range(m_max + 1):
        rho_n = matrix_norm2(Bn) ** (1.0 / n)
        grid = GridSpec.fitted(p, rho_n, resolution)
        _, comps = sublevel_components(p, rho_n, grid)
        ok = len(comps) >= 2 and separates_imaginary_axis(p, rho_n)
        steps.append((n, float(rho_n), bool(ok)))
        if ok:
            return PowerTrace(steps=steps, n=n, rho=float(rho_n))
        Bn = Bn @ Bn
        n *= 2
    raise RuntimeError(f"no separating power up to 2^{m_max}; trace: {steps}")


@dataclass(frozen=True)
class ProjectionReport:
    """Result of assembling phi(A) plus the standard diagnostics."""

    n: int
    rho: float
    order: int  # truncation order of the branch series in w
    values: tuple  # phi value per component, aligned with component labels
    phi_A: np.ndarray = field(repr=False)
    projector: np.ndarray | None = field(repr=False, default=None)
    bound: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self):
        def mat(M):
            return None if M is None else [[float(v.real), float(v.imag)] for v in M.ravel()]

        return {
            "n": self.n,
            "rho": self.rho,
            "order": self.order,
            "values": [[float(np.real(v)), float(np.imag(v))] for v in self.values],
            "size": len(self.phi_A),
            "phi_A": mat(self.phi_A),
            "projector": mat(self.projector),
            "bound": self.bound,
            "diagnostics": self.diagnostics,
        }


def _component_lookup(labels, grid, point):
    x, y = grid.axes()
    ci = int(np.argmin(np.abs(x - np.real(point))))
    ri = int(np.argmin(np.abs(y - np.imag(point))))
    lab = labels[ri, ci]
    if lab == 0:
        # tolerate one cell of grid noise
        window = labels[max(ri - 1, 0):ri + 2, max(ci - 1, 0):ci + 2]
        nz = window[window > 0]
        if nz.size:
            lab = int(nz[0])
    return int(lab)


def _component_values(comps, assignment, roots):
    """Resolve the component -> phi value map."""
    values = []
    for c in comps:
        if callable(assignment):
            values.append(complex(assignment(c)))
        elif isinstance(assignment, dict):
            if c.label not in assignment:
                raise ValueError(f"assignment misses component {c.label}")
            values.append(complex(assignment[c.label]))
        elif assignment == "sign":
            if not c.root_indices:
                values.append(0.0 + 0j)
                continue
            mean_re = float(np.mean([roots[j].real for j in c.root_indices]))
            values.append(1.0 + 0j if mean_re > 0 else -1.0 + 0j)
        elif assignment == "indicator-right":
            mean_re = float(np.mean([roots[j].real for j in c.root_indices])) if c.root_indices else -1.0
            values.append(1.0 + 0j if mean_re > 0 else 0.0 + 0j)
        elif assignment == "ones":
            values.append(1.0 + 0j)
        else:
            raise ValueError(f"unknown assignment {assignment!r}")
    return values


def _series_order(Bn, n, coeff_scale=8.0, tol=1e-13):
    """Series order in u = w^n so the matrix tail is negligible.

    Stops once the next power's norm contribution is below tolerance or
    the overall w-order cap is hit; a tail that has not even dropped
    below 1 by the cap cannot converge and is refused.
    """
    nrm = 1.0
    powers = [np.eye(len(Bn), dtype=complex)]
    m = 0
    while True:
        m += 1
        powers.append(powers[-1] @ Bn)
        nrm = matrix_norm2(powers[-1])
        if not np.isfinite(nrm) or nrm > 1e9:
            raise RuntimeError(f"series tail diverging: ||B^{m}|| = {nrm:.3g}")
        if nrm * coeff_scale < tol:
            break
        if (m + 1) * n >= ORDER_CAP:
            if nrm >= 1.0:
                raise RuntimeError(
                    f"series tail not decaying: ||B^{m}|| = {nrm:.3g} at the order cap")
            break
    return m, powers


def riesz_projection(p: MonicPolynomial, A: np.ndarray, n: int | None = None,
                     order: int | None = None, assignment="sign",
                     resolution: int = 801,
                     compute_bound: bool = True) -> ProjectionReport:
    """phi(A) through the folded multicentric series.

    ``assignment`` fixes phi on each component of the sublevel set at
    rho = ||p(A)^n||^(1/n): the strings "sign" (+1 right of the imaginary
    axis, -1 left), "indicator-right" (1/0) and "ones", a dict keyed by
    component label, or a callable on components.  With n omitted the
    power schedule picks the smallest separating 2^m.  The branch series
    are produced by the resummation route, which stays accurate at the
    high orders the folded evaluation needs.
    """
    A = np.asarray(A, dtype=complex)
    if n is None:
        n = power_schedule(p, A).n
    Bn = np.linalg.matrix_power(poly_apply(p, A), n)
    rho = matrix_norm2(Bn) ** (1.0 / n)
    grid = GridSpec.fitted(p, rho, resolution)
    labels, comps = sublevel_components(p, rho, grid)
    if len(comps) < 2 and assignment in ("sign", "indicator-right"):
        raise ValueError(f"sublevel set at rho={rho:.6g} has {len(comps)} component(s); "
                         "no two-sided assignment possible")
    values = _component_values(comps, assignment, p.roots)
    by_label = {c.label: v for c, v in zip(comps, values)}
    center_vals = []
    for j, lam in enumerate(p.roots):
        lab = _component_lookup(labels, grid, lam)
        if lab == 0:
            raise ValueError(f"center {j} at {lam:.4g} lies in no component of the sublevel set")
        center_vals.append(by_label[lab])

    if order is None:
        n_u, powers = _series_order(Bn, n)
        w_order = n * (n_u + 1) - 1
    else:
        w_order = order
        powers = [np.linalg.matrix_power(Bn, m) for m in range(w_order // n + 1)]

    jets = JetSpec.constants(center_vals, w_order)
    ms = fj_interpolation(p, jets, w_order)
    folded = fold_multicentric(ms, n)

    eye = np.eye(len(A), dtype=complex)
    pA_pows = [eye]
    pA = poly_apply(p, A)
    for _ in range(n - 1):
        pA_pows.append(pA_pows[-1] @ pA)
    phi_A = np.zeros_like(A)
    for j in range(p.degree):
        dj = _matrix_poly(lagrange_basis(p, j), A)
        inner = np.zeros_like(A)
        for k in range(n):
            fjk = folded.table[j][k]
            inner = inner + pA_pows[k] @ _matrix_series(fjk, powers)
        phi_A = phi_A + dj @ inner
    sup_phi = float(np.max(np.abs(values))) if values else 0.0

    projector = None
    vals_arr = np.array(values)
    val_set = set(np.round(vals_arr.real, 12)) if np.allclose(vals_arr.imag, 0) else None
    if val_set == {-1.0, 1.0}:
        projector = 0.5 * (eye + phi_A)
    elif val_set is not None and val_set <= {0.0, 1.0}:
        projector = phi_A

    bound = None
    if compute_bound:
        try:
            bound = riesz_bound(p, A, n, rho, sup_phi=sup_phi, grid=grid)
        except ValueError:
            bound = None

    diag = {
        "idempotency": float(matrix_norm2(projector @ projector - projector)) if projector is not None else None,
        "commutation": float(commutator_norm(A, phi_A)),
        "trace": [float(np.trace(phi_A).real), float(np.trace(phi_A).imag)],
        "norm_phi_A": float(matrix_norm2(phi_A)),
        "sign_residual": (float(matrix_norm2(phi_A @ phi_A - eye))
                          if projector is not None and np.any(vals_arr.real < 0) else None),
    }
    return ProjectionReport(n=n, rho=float(rho), order=w_order, values=tuple(values),
                            phi_A=phi_A, projector=projector, bound=bound, diagnostics=diag)


def _matrix_poly(coeffs_desc, A):
    eye = np.eye(len(A), dtype=complex)
    B = np.zeros_like(np.asarray(A, dtype=complex))
    for c in coeffs_desc:
        B = B @ A + c * eye
    return B


def _matrix_series(series, powers):
    """Evaluate a truncated series at a matrix given precomputed powers."""
    B = np.zeros_like(powers[0])
    for m, c in enumerate(series.coeffs):
        if m >= len(powers):
            break
        B = B + c * powers[m]
    return B


def riesz_bound(p: MonicPolynomial, A: np.ndarray, n: int, rho: float,
                C: float | None = None, s: float | None = None,
                sup_phi: float = 1.0, simple_critical: bool = False,
                grid: GridSpec | None = None) -> float:
    """Norm bound (1 + C/s^e) * sum_k ||p(A)^k||/rho^k * sum_j ||delta_j(A)|| * sup|phi|.

    e = d - 1 in general; ``simple_critical`` switches to e = 1, valid
    when the outside critical point is simple.  C and s are measured on
    the lemniscate at the given level unless supplied.
    """
    if s is None:
        s = separation_gap_s(p, rho, grid)
    if C is None:
        C = sum_abs_delta(p, rho) * s
    e = 1 if simple_critical else p.degree - 1
    mid = 0.0
    pA = poly_apply(p, A)
    Bk = np.eye(len(A), dtype=complex)
    for k in range(n):
        mid += matrix_norm2(Bk) / rho ** k
        Bk = Bk @ pA
    dsum = sum(matrix_norm2(_matrix_poly(lagrange_basis(p, j), A)) for j in range(p.degree))
    return float((1.0 + C / s ** e) * mid * dsum * sup_phi)


def oracle_projection_eigen(A: np.ndarray, predicate) -> np.ndarray:
    """V diag(predicate(lambda_i)) V^{-1}; refuses ill-conditioned eigenbases."""
    A = np.asarray(A, dtype=complex)
    lam, V = np.linalg.eig(A)
    cond = np.linalg.cond(V)
    if cond > 1e8:
        raise ValueError(f"eigenbasis condition {cond:.3g} too large; matrix is near defective")
    D = np.diag([1.0 if predicate(l) else 0.0 for l in lam])
    return V @ D @ np.linalg.inv(V)


def oracle_projection_contour(A: np.ndarray, center: complex, radius: float,
                              Q: int = 256, check_tol: float = 1e-9) -> np.ndarray:
    """Resolvent quadrature (1/2 pi i) oint (lambda I - A)^{-1} d lambda.

    Trapezoid rule on the circle; doubling the node count must move the
    result by less than ``check_tol`` (trapezoid is spectrally accurate
    on periodic integrands), otherwise the contour is too close to the
    spectrum.
    """
    A = np.asarray(A, dtype=complex)

    def quad(q):
        eye = np.eye(len(A), dtype=complex)
        P = np.zeros_like(A)
        for t in np.arange(q) * (2 * np.pi / q):
            lam = center + radius * np.exp(1j * t)
            P = P + radius * np.exp(1j * t) * np.linalg.solve(lam * eye - A, eye)
        return P / q

    P1 = quad(Q)
    P2 = quad(2 * Q)
    if matrix_norm2(P2 - P1) > check_tol:
        raise ValueError("quadrature not converged: contour too close to the spectrum")
    return P2


def block_matrix(alpha: float, gamma: float) -> np.ndarray:
    """The 4x4 coupled test matrix [[B, X], [0, -B]] with B = [[a,1],[0,a]]."""
    B = np.array([[alpha, 1.0], [0.0, alpha]], dtype=complex)
    X = np.array([[0.0, gamma], [gamma, 0.0]], dtype=complex)
    Z = np.zeros((2, 2), dtype=complex)
    return np.block([[B, X], [Z, -B]])


def block_power_closed_form(alpha: float, gamma: float, n: int) -> np.ndarray:
    """Closed form of (A^2 - I)^n for the block matrix: [[C^n, n c^{n-1} Y], [0, C^n]]."""
    c = alpha ** 2 - 1.0
    C = np.array([[c, 2 * alpha], [0.0, c]], dtype=complex)
    Y = np.array([[gamma, 0.0], [0.0, -gamma]], dtype=complex)
    Cn = np.linalg.matrix_power(C, n)
    off = n * c ** (n - 1) * Y
    Z = np.zeros((2, 2), dtype=complex)
    return np.block([[Cn, off], [Z, Cn]])


def block_example(alpha: float, gamma: float, n: int) -> dict:
    """Compare computed p(A)^n with the closed block form and the norm asymptote."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = from_roots([1.0, -1.0])
    A = block_matrix(alpha, gamma)
    computed = np.linalg.matrix_power(poly_apply(p, A), n)
    closed = block_power_closed_form(alpha, gamma, n)
    scale = max(1.0, float(np.max(np.abs(closed))))
    c = abs(alpha ** 2 - 1.0)
    asym = c ** (n - 1) * (c + n * (abs(alpha) + abs(gamma)))
    nrm = matrix_norm2(computed)
    return {
        "alpha": alpha,
        "gamma": gamma,
        "n": n,
        "max_entry_error": float(np.max(np.abs(computed - closed))),
        "scaled_entry_error": float(np.max(np.abs(computed - closed)) / scale),
        "norm": nrm,
        "asymptote": float(asym),
        "norm_over_asymptote": float(nrm / asym) if asym > 0 else None,
    }


def first_norm_below_one(alpha: float, gamma: float, n_max: int = 4096) -> int:
    """Smallest n with ||p(A)^n|| < 1 for the block example, p = z^2 - 1."""
    A = block_matrix(alpha, gamma)
    B = poly_apply(from_roots([1.0, -1.0]), A)
    Bn = np.eye(4, dtype=complex)
    for n in range(1, n_max + 1):
        Bn = Bn @ B
        if matrix_norm2(Bn) < 1.0:
            return n
    raise RuntimeError(f"norm never fell below 1 up to n={n_max}")


def matrix_to_json(A: np.ndarray) -> dict:
    A = np.asarray(A, dtype=complex)
    return {"n": len(A), "entries": [[float(v.real), float(v.imag)] for v in A.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    n = obj["n"]
    vals = np.array([complex(re, im) for re, im in obj["entries"]])
    return vals.reshape(n, n)


def save_matrix_text(A: np.ndarray, path):
    """Plain text: one row per line, two floats (re, im) per entry."""
    A = np.asarray(A, dtype=complex)
    with open(path, "w") as fh:
        for row in A:
            fh.write(" ".join(f"{v.real:.17g} {v.imag:.17g}" for v in row) + "\n")


def load_matrix_text(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            nums = [float(t) for t in line.split()]
            if not nums:
                continue
            if len(nums) % 2:
                raise ValueError("expected an even number of floats per row")
            rows.append([complex(nums[i], nums[i + 1]) for i in range(0, len(nums), 2)])
    A = np.array(rows, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix text file must be square")
    return A
