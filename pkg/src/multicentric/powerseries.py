"""Truncated complex power series and the local series of the calculus.

The working variable is w = p(z).  ``root_branch`` follows a root of
p(lambda) - w = 0 out of a chosen center as a series in w, and
``delta_lambda_series`` expands the two-variable interpolation kernel

    delta_l(lambda, w) = (p(lambda) - w) / (p'(zeta_l(w)) (lambda - zeta_l(w))).

Two independent routes produce the branch series f_j of a function given
by its derivatives at the centers: a direct recursion on the Taylor
coefficients (``fj_recursion``, including the correction term that the
plain chain-rule bookkeeping drops) and resummation through the branches
(``fj_interpolation``).  They must agree; the test suite enforces it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polynomials import MonicPolynomial, lagrange_basis, lagrange_values


class TruncatedSeries:
    """Complex coefficients c_0..c_N in one formal variable, fixed order N."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order=None):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        if order is not None:
            out = np.zeros(order + 1, dtype=complex)
            out[: min(len(c), order + 1)] = c[: order + 1]
            c = out
        self.coeffs = c

    @property
    def order(self):
        return len(self.coeffs) - 1

    @staticmethod
    def variable(order):
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1.0
        return TruncatedSeries(c)

    @staticmethod
    def constant(value, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return TruncatedSeries(c)

    def truncate(self, order):
        return TruncatedSeries(self.coeffs, order)

    def _match(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries.constant(other, self.order)
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")
        return other

    def __add__(self, other):
        other = self._match(other)
        return TruncatedSeries(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._match(other)
        return TruncatedSeries(self.coeffs - other.coeffs)

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return TruncatedSeries(self.coeffs * other)
        other = self._match(other)
        return TruncatedSeries(np.convolve(self.coeffs, other.coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def reciprocal(self):
        """Newton iteration with order doubling; needs |c_0| > 1e-14."""
        a = self.coeffs
        if abs(a[0]) < 1e-14:
            raise ZeroDivisionError("reciprocal of a series with (near) zero constant term")
        n = self.order
        r = np.array([1.0 / a[0]], dtype=complex)
        attained = 0
        while attained < n:
            attained = min(2 * attained + 1, n)
            ar = np.convolve(a[: attained + 1], r)[: attained + 1]
            two = np.zeros(attained + 1, dtype=complex)
            two[0] = 2.0
            r = np.convolve(r, two - ar)[: attained + 1]
        return TruncatedSeries(r, n)

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return TruncatedSeries(self.coeffs / other)
        other = self._match(other)
        return self * other.reciprocal()

    def derivative(self):
        """Termwise derivative; the order drops by one."""
        if self.order == 0:
            return TruncatedSeries([0.0])
        k = np.arange(1, self.order + 1)
        return TruncatedSeries(self.coeffs[1:] * k)

    def shift_down(self):
        """Divide by the variable, assuming c_0 = 0; keeps the order."""
        if abs(self.coeffs[0]) > 1e-13:
            raise ValueError("cannot factor the variable out: nonzero constant term")
        return TruncatedSeries(np.append(self.coeffs[1:], 0.0))

    def compose(self, inner):
        """Substitute a series with zero constant term (Horner on series)."""
        if abs(inner.coeffs[0]) > 1e-13:
            raise ValueError("composition needs inner constant term = 0")
        n = inner.order
        acc = TruncatedSeries.constant(0.0, n)
        for c in self.coeffs[::-1]:
            acc = acc * inner
            acc.coeffs[0] += c
        return acc

    def __call__(self, w):
        """Partial-sum evaluation at (arrays of) points w."""
        w = np.asarray(w, dtype=complex)
        out = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            out = out * w + c
        return out

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={np.round(self.coeffs, 6)})"

    def to_json(self):
        return {
            "order": self.order,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @staticmethod
    def from_json(obj):
        return TruncatedSeries([complex(re, im) for re, im in obj["coeffs"]], obj["order"])


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_scale(a, s):
    return a * s


def series_reciprocal(a):
    return a.reciprocal()


def series_derive(a):
    return a.derivative()


def polyval_series(coeffs_desc, s: TruncatedSeries) -> TruncatedSeries:
    """Evaluate a polynomial (descending coefficients) at a series argument."""
    acc = TruncatedSeries.constant(0.0, s.order)
    for c in coeffs_desc:
        acc = acc * s
        acc.coeffs[0] += c
    return acc


def root_branch(p: MonicPolynomial, l: int, order: int) -> TruncatedSeries:
    """Series zeta_l(w) of the root of p(lambda) - w = 0 starting at root l.

    Series Newton iteration zeta <- zeta - (p(zeta) - w)/p'(zeta); the
    attained order doubles per step, so log2(order) sweeps suffice.
    """
    if not p.simple_roots:
        raise ValueError("root branches require simple roots")
    lam = p.roots[l]
    dp = p.derivative()
    if abs(np.polyval(dp, lam)) < 1e-12:
        raise ZeroDivisionError(f"center {l} is a critical point; branch is singular")
    zeta = TruncatedSeries.constant(lam, order)
    w = TruncatedSeries.variable(order)
    attained = 0
    while attained < order:
        residual = polyval_series(p.coeffs_desc, zeta) - w
        zeta = zeta - residual / polyval_series(dp, zeta)
        attained = max(1, 2 * attained)
    return zeta


def branch_residual(p: MonicPolynomial, zeta: TruncatedSeries) -> np.ndarray:
    """Coefficients of p(zeta(w)) - w; all should vanish up to the order."""
    res = polyval_series(p.coeffs_desc, zeta) - TruncatedSeries.variable(zeta.order)
    return res.coeffs


def delta_lambda_series(p: MonicPolynomial, l: int, j: int, order: int) -> TruncatedSeries:
    """Series in w of delta_l(lambda_j, w).

    For j == l both the numerator p(lambda_l) - w and the denominator
    vanish to first order at w = 0; one power of w is factored from each
    before dividing, which keeps the quotient finite with value 1 at 0.
    """
    zeta, deltas = _branch_deltas(p, l, order, centers=[j])
    return deltas[0]


def _branch_deltas(p: MonicPolynomial, l: int, order: int, centers=None):
    """One branch zeta_l plus delta_l(lambda_j, .) for the requested centers."""
    if centers is None:
        centers = range(p.degree)
    zeta = root_branch(p, l, order + 1)
    dp_at_zeta = polyval_series(p.derivative(), zeta)
    w = TruncatedSeries.variable(order + 1)
    out = []
    for j in centers:
        lam = p.roots[j]
        num = TruncatedSeries.constant(complex(p(lam)), order + 1) - w
        den = dp_at_zeta * (TruncatedSeries.constant(lam, order + 1) - zeta)
        if j == l:
            # removable singularity: both terms carry exactly one power of w
            if abs(num.coeffs[0]) > 1e-13 or abs(den.coeffs[0]) > 1e-13:
                raise ValueError("center/branch mismatch: constant terms do not vanish")
            num.coeffs[0] = 0.0
            den.coeffs[0] = 0.0
            num = num.shift_down()
            den = den.shift_down()
        out.append((num / den).truncate(order))
    return zeta.truncate(order), out


def b_table(p: MonicPolynomial, n_max: int):
    """Chain-rule polynomials b_{nm} for 1 <= m <= n <= n_max.

    Returned as a dict {(n, m): descending coefficients}; entries with
    m = 0 or m > n are identically zero and omitted.  The defining
    recursion is b_{n+1,m} = b_{n,m-1} p' + b_{nm}'.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dp = p.derivative()
    table = {(1, 1): dp.copy()}
    for n in range(1, n_max):
        for m in range(1, n + 2):
            acc = None
            prev = table.get((n, m - 1))
            if prev is not None:
                acc = np.convolve(prev, dp)
            cur = table.get((n, m))
            if cur is not None and len(cur) > 1:
                der = np.polyder(cur)
                if acc is None:
                    acc = der
                else:
                    acc = acc.copy()
                    acc[-len(der):] += der
            if acc is not None:
                table[(n + 1, m)] = acc
    return table


@dataclass(frozen=True)
class JetSpec:
    """Raw derivatives phi(lambda_j), phi'(lambda_j), ... per center."""

    derivatives: np.ndarray  # shape (d, N+1)

    @property
    def order(self):
        return self.derivatives.shape[1] - 1

    @staticmethod
    def constants(values, order):
        """Locally constant phi: value per center, all derivatives zero."""
        values = np.asarray(values, dtype=complex)
        der = np.zeros((len(values), order + 1), dtype=complex)
        der[:, 0] = values
        return JetSpec(der)

    @staticmethod
    def of_polynomial(coeffs_desc, centers, order):
        """Jets of a polynomial phi given by descending coefficients."""
        coeffs_desc = np.asarray(coeffs_desc, dtype=complex)
        centers = np.asarray(centers, dtype=complex)
        der = np.zeros((len(centers), order + 1), dtype=complex)
        work = coeffs_desc
        for q in range(order + 1):
            if len(work) == 0:
                break
            der[:, q] = np.polyval(work, centers)
            work = np.polyder(work) if len(work) > 1 else np.array([])
        return JetSpec(der)

    def scaled(self):
        """phi^(q)(lambda_j)/q! - the local Taylor coefficients.

        Divides progressively; beyond the float range of q! only zero
        derivatives are representable, anything else is refused.
        """
        out = np.array(self.derivatives, dtype=complex)
        fact = 1.0
        for q in range(1, self.order + 1):
            fact *= q
            if np.isinf(fact):
                if np.any(out[:, q:]):
                    raise OverflowError("raw derivatives beyond order 170 exceed float range")
                out[:, q:] = 0.0
                break
            out[:, q] /= fact
        return out


@dataclass(frozen=True)
class MulticentricSeries:
    """d branch series f_1..f_d tied to one polynomial, all of equal order."""

    polynomial: MonicPolynomial
    branches: tuple

    def __post_init__(self):
        if len(self.branches) != self.polynomial.degree:
            raise ValueError("need one branch per root")
        orders = {b.order for b in self.branches}
        if len(orders) != 1:
            raise ValueError("branches must share one truncation order")

    @property
    def order(self):
        return self.branches[0].order

    def __call__(self, z):
        return evaluate_multicentric(self, z)

    def to_json(self):
        return {
            "polynomial": self.polynomial.to_json(),
            "branches": [b.to_json() for b in self.branches],
        }

    @staticmethod
    def from_json(obj):
        return MulticentricSeries(
            MonicPolynomial.from_json(obj["polynomial"]),
            tuple(TruncatedSeries.from_json(b) for b in obj["branches"]),
        )


def _delta_taylor_at_centers(p: MonicPolynomial):
    """dls[k, j, q] = q-th Taylor coefficient of delta_k at lambda_j."""
    d = p.degree
    dls = np.zeros((d, d, d), dtype=complex)
    for k in range(d):
        dk = lagrange_basis(p, k)
        for j in range(d):
            work = dk
            for q in range(d):
                if len(work) == 0:
                    break
                dls[k, j, q] = np.polyval(work, p.roots[j])
                work = np.polyder(work) / (q + 1) if len(work) > 1 else np.array([])
    return dls


def _beta_constants(p: MonicPolynomial, j: int, n_max: int) -> np.ndarray:
    """Triangular array beta[n, l] = b_{nl}(lambda_j) l!/n!, with beta[0,0] = 1.

    Computed on truncated Taylor jets at lambda_j so that the derivative in
    the b-recursion stays exact: row n only needs accuracy to order
    n_max - n.  The l!/n! scaling keeps the magnitudes polynomial in n
    where the raw b-values would grow factorially.
    """
    lam = p.roots[j]
    dp = p.derivative()
    Q = n_max
    pd_jet = np.zeros(Q + 1, dtype=complex)
    work = dp
    for q in range(Q + 1):
        if len(work) == 0:
            break
        pd_jet[q] = np.polyval(work, lam)
        work = np.polyder(work) / (q + 1) if len(work) > 1 else np.array([])
    beta = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    beta[0, 0] = 1.0
    if n_max == 0:
        return beta
    rows = {1: pd_jet[:Q].copy()}  # jet of beta_{1,1}
    beta[1, 1] = rows[1][0]
    for n in range(1, n_max):
        L = max(Q - (n + 1), 0) + 1  # jet length for row n+1
        new_rows = {}
        for m in range(1, n + 2):
            acc = np.zeros(L, dtype=complex)
            cur = rows.get(m)
            if cur is not None and len(cur) > 1:
                der = cur[1:] * np.arange(1, len(cur))
                acc[: min(L, len(der))] += der[:L]
            prev = rows.get(m - 1)
            if prev is not None:
                acc += m * np.convolve(prev, pd_jet)[:L]
            acc /= n + 1
            new_rows[m] = acc
            beta[n + 1, m] = acc[0]
        rows = new_rows
    return beta


def fj_recursion(p: MonicPolynomial, jets: JetSpec, order: int) -> MulticentricSeries:
    """Branch series from the coefficient recursion at the centers.

    Works on the scaled coefficients c_n = f_j^(n)(0)/n!; the defining
    relation divides by (p'(lambda_j))^n each step, so near-critical
    centers are rejected.  The final sum over previous rows of the same
    center is the correction term that naive bookkeeping misses; dropping
    it breaks the route-equivalence tests immediately.
    """
    d = p.degree
    if jets.derivatives.shape[0] != d:
        raise ValueError("jets must provide one derivative list per center")
    if jets.order < order:
        raise ValueError("jets shorter than requested order")
    dp_at = np.polyval(p.derivative(), p.roots)
    if np.min(np.abs(dp_at)) < 1e-12:
        raise ZeroDivisionError("p' vanishes at a center")
    phi = jets.scaled()
    dls = _delta_taylor_at_centers(p)
    betas = [_beta_constants(p, j, order) for j in range(d)]
    cs = np.zeros((d, order + 1), dtype=complex)
    cs[:, 0] = phi[:, 0]
    for n in range(1, order + 1):
        for j in range(d):
            rhs = phi[j, n]
            beta = betas[j]
            for k in range(d):
                for m in range(max(0, n - d + 1), n):
                    q = n - m
                    if q >= d or dls[k, j, q] == 0:
                        continue
                    rhs -= dls[k, j, q] * np.dot(beta[m, : m + 1], cs[k, : m + 1])
            rhs -= np.dot(beta[n, :n], cs[j, :n])
            cs[j, n] = rhs / dp_at[j] ** n
    return MulticentricSeries(p, tuple(TruncatedSeries(row) for row in cs))


def fj_interpolation(p: MonicPolynomial, jets: JetSpec, order: int) -> MulticentricSeries:
    """Branch series by resummation: f_j(w) = sum_l delta_l(lambda_j,w) phi(zeta_l(w)).

    Locally constant data short-circuits the composition, which lets this
    route run to high order where the recursion would lose accuracy.
    """
    d = p.degree
    if jets.derivatives.shape[0] != d:
        raise ValueError("jets must provide one derivative list per center")
    phi = jets.scaled()
    constant = not np.any(jets.derivatives[:, 1:])
    acc = [TruncatedSeries.constant(0.0, order) for _ in range(d)]
    for l in range(d):
        zeta, deltas = _branch_deltas(p, l, order)
        if constant:
            comp = TruncatedSeries.constant(phi[l, 0], order)
        else:
            t = zeta - TruncatedSeries.constant(p.roots[l], order)
            comp = TruncatedSeries(phi[l, : order + 1], order).compose(t)
        for j in range(d):
            acc[j] = acc[j] + deltas[j] * comp
    return MulticentricSeries(p, tuple(acc))


def evaluate_multicentric(ms: MulticentricSeries, z):
    """Partial-sum evaluation sum_j delta_j(z) f_j(p(z)).

    Truncation error is the caller's business: meaningful only where
    |p(z)| stays inside the reliable radius of the branch series.
    """
    z = np.asarray(z, dtype=complex)
    w = ms.polynomial(z)
    deltas = lagrange_values(ms.polynomial, z)
    out = np.zeros_like(z)
    for j, branch in enumerate(ms.branches):
        out = out + deltas[j] * branch(w)
    return out
