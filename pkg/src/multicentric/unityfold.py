"""Roots-of-unity decomposition g(w) = sum_k w^k g_k(w^n).

Splitting a series by coefficient residue classes mod n is pure index
bookkeeping; the pointwise averaging over rotated arguments

    w^k g_k(w^n) = (1/n) sum_nu e^{-2 pi i k nu / n} g(e^{2 pi i nu / n} w)

defines the same pieces and is kept as an independent oracle.  Folding a
multicentric series this way is what lets the calculus run in the
variable p(z)^n, whose roots are no longer simple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .powerseries import MulticentricSeries, TruncatedSeries


def split_coefficients(g: TruncatedSeries, n: int):
    """Stride-filter g into n series g_0..g_{n-1} in the variable u = w^n.

    g_k picks up the coefficients alpha_k, alpha_{n+k}, alpha_{2n+k}, ...;
    its order is floor((N - k)/n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for k in range(n):
        sl = g.coeffs[k::n]
        if len(sl) == 0:
            sl = np.zeros(1, dtype=complex)
        out.append(TruncatedSeries(sl))
    return out


def split_pointwise(g_evaluator, w, n: int, k: int):
    """The n-term roots-of-unity average equal to w^k g_k(w^n)."""
    if not 0 <= k < n:
        raise ValueError("need 0 <= k < n")
    acc = 0.0 + 0.0j
    for nu in range(n):
        rot = np.exp(2j * np.pi * nu / n)
        acc += np.exp(-2j * np.pi * k * nu / n) * g_evaluator(rot * w)
    return acc / n


@dataclass(frozen=True)
class FoldedMulticentric:
    """d x n table of series f_{j,k}(u) with u = w^n."""

    polynomial: object
    n: int
    table: tuple  # table[j][k] is a TruncatedSeries in u

    def reconstruct_branch(self, j: int, order: int) -> TruncatedSeries:
        """Interleave sum_k w^k f_{j,k}(w^n) back to a series in w."""
        c = np.zeros(order + 1, dtype=complex)
        for k, gk in enumerate(self.table[j]):
            for m, a in enumerate(gk.coeffs):
                idx = k + m * self.n
                if idx <= order:
                    c[idx] = a
        return TruncatedSeries(c)

    def to_json(self):
        return {
            "n": self.n,
            "polynomial": self.polynomial.to_json(),
            "branches": [[gk.to_json() for gk in row] for row in self.table],
        }


def fold_multicentric(ms: MulticentricSeries, n: int) -> FoldedMulticentric:
    """Split every branch of a multicentric series by residue class mod n."""
    table = tuple(tuple(split_coefficients(b, n)) for b in ms.branches)
    return FoldedMulticentric(ms.polynomial, n, table)
