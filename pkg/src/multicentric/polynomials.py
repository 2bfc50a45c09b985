"""Monic polynomials with distinct roots and the perturbed model families.

Everything downstream (series branches, lemniscate geometry, matrix
calculus) consumes the root list; coefficients are derived once by
incremental multiplication and kept alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SIMPLE_ROOT_TOL = 1e-9
CLUSTER_TOL = 1e-7


def _coeffs_from_roots(roots):
    c = np.array([1.0 + 0.0j])
    for r in roots:
        c = np.convolve(c, np.array([1.0, -r]))
    return c  # descending powers, monic


@dataclass(frozen=True)
class MonicPolynomial:
    """Degree-d monic polynomial held as its root list.

    ``coeffs_desc`` is the full descending coefficient vector (leading 1
    included); ``coeffs`` exposes a_0..a_{d-1} ascending as serialized.
    """

    roots: np.ndarray
    coeffs_desc: np.ndarray = field(repr=False)
    simple_roots: bool = True

    @property
    def degree(self):
        return len(self.roots)

    @property
    def coeffs(self):
        return self.coeffs_desc[::-1][:-1].copy()  # a_0 .. a_{d-1}

    def __call__(self, z):
        return np.polyval(self.coeffs_desc, z)

    def evaluate_product(self, z):
        """Product-form evaluation, cross-check for the coefficient form."""
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r in self.roots:
            out = out * (z - r)
        return out

    def derivative(self):
        """Coefficients of p' in descending powers (non-monic)."""
        return np.polyder(self.coeffs_desc)

    def min_root_separation(self):
        d = self.degree
        if d < 2:
            return np.inf
        diffs = np.abs(self.roots[:, None] - self.roots[None, :])
        return np.min(diffs[~np.eye(d, dtype=bool)])

    def to_json(self):
        return {
            "degree": self.degree,
            "roots": [[float(r.real), float(r.imag)] for r in self.roots],
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @staticmethod
    def from_json(obj):
        roots = np.array([complex(re, im) for re, im in obj["roots"]])
        return from_roots(roots)


def from_roots(roots) -> MonicPolynomial:
    """Build a monic polynomial from its roots."""
    roots = np.atleast_1d(np.asarray(roots, dtype=complex))
    if roots.size == 0:
        raise ValueError("need at least one root")
    if not np.all(np.isfinite(roots)):
        raise ValueError("roots must be finite")
    coeffs = _coeffs_from_roots(roots)
    p = MonicPolynomial(roots=roots, coeffs_desc=coeffs, simple_roots=True)
    if p.min_root_separation() <= SIMPLE_ROOT_TOL:
        object.__setattr__(p, "simple_roots", False)
    return p


def evaluate(p: MonicPolynomial, z):
    """Horner evaluation of p on the coefficient form."""
    return p(z)


def derivative(p: MonicPolynomial):
    return p.derivative()


def _cluster_radius(size: int) -> float:
    # companion eigenvalues of an m-fold root scatter like eps^(1/m)
    return max(CLUSTER_TOL, (200 * np.finfo(float).eps) ** (1.0 / (size + 1)))


def critical_points(p: MonicPolynomial):
    """Roots of p' as (point, multiplicity) pairs.

    Companion-matrix eigenvalues, agglomerated closest-pair-first with a
    radius that widens with the hypothesized multiplicity (an m-fold root
    is only computable to eps^(1/m), so a fixed 1e-7 would shatter it),
    then polished by multiplicity-aware Newton steps.
    """
    if p.degree < 2:
        raise ValueError("need degree >= 2 for critical points")
    dp = p.derivative()
    pts = np.roots(dp).astype(complex)
    if not np.all(np.isfinite(pts)):
        raise RuntimeError("critical point computation did not converge")
    clusters = [[z] for z in pts]
    while len(clusters) > 1:
        best = None
        for i in range(len(clusters)):
            for k in range(i + 1, len(clusters)):
                ci = np.mean(clusters[i])
                ck = np.mean(clusters[k])
                dist = abs(ci - ck)
                if best is None or dist < best[0]:
                    best = (dist, i, k)
        dist, i, k = best
        if dist > _cluster_radius(len(clusters[i]) + len(clusters[k])):
            break
        clusters[i] = clusters[i] + clusters[k]
        del clusters[k]
    out = []
    ddp = np.polyder(dp)
    for grp in clusters:
        c = complex(np.mean(grp))
        m = len(grp)
        for _ in range(4):  # multiplicity-aware Newton, quadratic for exact m
            slope = np.polyval(ddp, c)
            if abs(slope) < 1e-300:
                break
            step = m * np.polyval(dp, c) / slope
            if not np.isfinite(step):
                break
            c = c - step
        out.append((complex(c), int(m)))
    return out


def lagrange_basis(p: MonicPolynomial, k: int):
    """Coefficients (descending) of the Lagrange basis polynomial delta_k."""
    if not p.simple_roots:
        raise ValueError("Lagrange basis requires simple roots")
    num = np.array([1.0 + 0.0j])
    for i, r in enumerate(p.roots):
        if i != k:
            num = np.convolve(num, np.array([1.0, -r]))
    dp_at = np.polyval(p.derivative(), p.roots[k])
    return num / dp_at


def lagrange_values(p: MonicPolynomial, z):
    """All delta_k(z) stacked; axis 0 runs over the basis index."""
    z = np.asarray(z, dtype=complex)
    dp = p.derivative()
    out = np.empty((p.degree,) + z.shape, dtype=complex)
    for k in range(p.degree):
        num = np.ones_like(z)
        for i, r in enumerate(p.roots):
            if i != k:
                num = num * (z - r)
        out[k] = num / np.polyval(dp, p.roots[k])
    return out


@dataclass(frozen=True)
class SeparationTask:
    """Two vertical segments at x = +-1 with half-height tan(alpha)."""

    half_gap_angle: float
    x_offsets: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if not 0 <= self.half_gap_angle < np.pi / 2:
            raise ValueError("half gap angle must lie in [0, pi/2)")

    def sample(self, n=2001):
        y = np.linspace(-np.tan(self.half_gap_angle), np.tan(self.half_gap_angle), n)
        return [x + 1j * y for x in self.x_offsets]


def model_polynomial(d: int, epsilon: float, style: str = "conjugate") -> MonicPolynomial:
    """Perturbed roots-of-unity family used throughout the separation study.

    Start from z^d - 1; when some root lies on the imaginary axis
    (d divisible by 4) rotate all roots by pi/d, giving z^d + 1.  The four
    roots nearest the imaginary axis are then moved along the unit circle
    by the angle ``epsilon``:

    * ``conjugate`` (default): each of the four moves toward the real
      axis, keeping the root set closed under conjugation and negation,
      so the coefficients stay real.
    * ``uniform``: the same four roots are rotated rigidly by -epsilon.
      The root set loses conjugation symmetry (complex coefficients);
      this variant exists because the published reference sums for
      degrees 8, 12 and 14 were evidently produced this way.
    """
    if d < 2 or d % 2:
        raise ValueError("model family is defined for even degree >= 2")
    if not 0 <= epsilon < np.pi / (2 * d):
        raise ValueError("epsilon out of range [0, pi/(2d))")
    if style not in ("conjugate", "uniform"):
        raise ValueError(f"unknown style {style!r}")
    ang = 2 * np.pi * np.arange(d) / d
    if d % 4 == 0:
        ang = ang + np.pi / d
    ang = np.mod(ang, 2 * np.pi)
    if d == 2:
        return from_roots(np.exp(1j * ang))  # no perturbation needed
    order = np.argsort(np.abs(np.cos(ang)), kind="stable")
    four = order[:4]
    for i in four:
        if style == "uniform":
            ang[i] -= epsilon
            continue
        a = ang[i]
        if a < np.pi / 2 or np.pi <= a < 3 * np.pi / 2:
            ang[i] = a - epsilon  # toward 0 resp. pi
        else:
            ang[i] = a + epsilon
    p = from_roots(np.exp(1j * ang))
    if style == "conjugate" and np.max(np.abs(p.coeffs_desc.imag)) > 1e-12:
        raise AssertionError("conjugate model family must have real coefficients")
    return p


def cubic_example(epsilon: float) -> MonicPolynomial:
    """Cubic fixture: roots 1 and e^{+-i(2pi/3 + epsilon)}.

    The odd-degree rule stops here; only the complex pair is perturbed.
    """
    th = 2 * np.pi / 3 + epsilon
    return from_roots([1.0, np.exp(1j * th), np.exp(-1j * th)])
