"""Normalised spectra of Cayley graphs.

The normalised adjacency operator T has entries T[x][y] = #{s in S : sx = y}/d.
It is symmetric with row sums 1, so its spectrum lies in [-1, 1]. We report
both the adjacency eigenvalues t_1 <= ... <= t_n and the Laplacian eigenvalues
lambda_i = 1 - t_{n+1-i}, sorted ascending, with lambda_1 = 0 always.

Eigenvalues come from an in-repo cyclic Jacobi iteration; no external solver
is consulted outside the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cayley import CayleyGraph, square_multiset
from .errors import CapExceededError, ConvergenceError

MAX_SPECTRUM_DEFAULT = 2048
_JACOBI_MAX_SWEEPS = 64
_SYMMETRY_TOL = 1e-12


def normalized_adjacency(graph: CayleyGraph) -> list[list[float]]:
    """Dense T = A/d. Counts are checked exactly before dividing."""
    n, d = graph.n, graph.d
    count_rows = []
    for x in range(n):
        counts = [0] * n
        for y in graph.neighbors[x]:
            counts[y] += 1
        if sum(counts) != d:
            raise AssertionError("row sum mismatch in adjacency counts")
        count_rows.append(counts)
    for x in range(n):
        for y in range(x):
            if count_rows[x][y] != count_rows[y][x]:
                raise AssertionError("adjacency counts not symmetric")
    return [[c / d for c in row] for row in count_rows]


def eigenvalues_symmetric(matrix) -> list[float]:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.

    Convergence: off-diagonal Frobenius mass is driven below n * 1e-15 * scale
    where scale is the largest absolute entry, giving eigenvalue error far
    below the 1e-9 comparison tolerances used elsewhere. The rotations are
    applied in a fixed (p, q) order, so results are bitwise reproducible.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.size == 0:
        return []
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix is not square")
    n = a.shape[0]
    sym_gap = float(np.max(np.abs(a - a.T)))
    if sym_gap > _SYMMETRY_TOL:
        raise ValueError(f"matrix not symmetric: max |M - M^T| = {sym_gap:.3e}")
    if n == 1:
        return [float(a[0, 0])]
    scale = float(np.max(np.abs(a))) or 1.0
    target = n * 1e-15 * scale
    skip = 1e-18 * scale

    def off_norm() -> float:
        upper = a[np.triu_indices(n, k=1)]
        return math.sqrt(2.0 * float(np.dot(upper, upper)))

    for _ in range(_JACOBI_MAX_SWEEPS):
        if off_norm() <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                app, aqq = a[p, p], a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                new_p = c * col_p - s * col_q
                new_q = s * col_p + c * col_q
                a[:, p] = new_p
                a[:, q] = new_q
                a[p, :] = new_p
                a[q, :] = new_q
                # The 2x2 pivot block takes its closed form, not the
                # one-sided column formula.
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
    else:
        raise ConvergenceError(
            f"Jacobi iteration did not reach off-norm {target:.3e} "
            f"in {_JACOBI_MAX_SWEEPS} sweeps"
        )
    return sorted(float(a[i, i]) for i in range(n))


@dataclass(frozen=True)
class SpectralSummary:
    t: tuple[float, ...]     # adjacency eigenvalues, ascending
    lam: tuple[float, ...]   # Laplacian eigenvalues, ascending
    d: int

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def t_min(self) -> float:
        return self.t[0]

    @property
    def t_max(self) -> float:
        return self.t[-1]

    @property
    def lambda2(self) -> float:
        return self.lam[1]

    @property
    def lambda_max(self) -> float:
        return self.lam[-1]


def spectrum(graph: CayleyGraph, *, max_n: int = MAX_SPECTRUM_DEFAULT) -> SpectralSummary:
    if graph.n > max_n:
        raise CapExceededError("max_spectrum", max_n, graph.n)
    t = eigenvalues_symmetric(normalized_adjacency(graph))
    if abs(t[-1] - 1.0) > 1e-9:
        raise AssertionError(f"top adjacency eigenvalue {t[-1]!r}, expected 1")
    lam = tuple(1.0 - t[len(t) - 1 - i] for i in range(len(t)))
    return SpectralSummary(tuple(t), lam, graph.d)


def is_connected(summary: SpectralSummary, tol: float = 1e-9) -> bool:
    if summary.n == 1:
        return True
    return summary.lambda2 > tol


def is_bipartite_spectral(summary: SpectralSummary, tol: float = 1e-9) -> bool:
    return summary.lambda_max >= 2.0 - tol


def square_normalized_adjacency(graph: CayleyGraph) -> list[list[float]]:
    """Dense operator of the product multiset S·S: entry [x][y] = m(y x^-1)/d².

    Equals T @ T for the same graph (left action: x -> g x steps by g = t*s).
    """
    multiset = square_multiset(graph.gens, graph.group)
    group = graph.group
    n = graph.n
    d2 = multiset.total
    rows = []
    for x in range(n):
        inv_x = group.inv[x]
        row = [0.0] * n
        for y in range(n):
            m = multiset.counts.get(group.mult[y][inv_x], 0)
            if m:
                row[y] = m / d2
        rows.append(row)
    return rows


def square_spectrum_consistency(graph: CayleyGraph, tol: float = 1e-9) -> bool:
    """True iff spec of the S·S operator equals {t_i^2} elementwise (sorted)."""
    direct = eigenvalues_symmetric(square_normalized_adjacency(graph))
    squared = sorted(t * t for t in spectrum(graph).t)
    if len(direct) != len(squared):
        return False
    return max(abs(x - y) for x, y in zip(direct, squared)) <= tol
