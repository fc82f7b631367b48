"""Pure-Python fallback for the compiled numeric kernels.

Mirrors ``_core.pyx`` operation for operation so both backends produce
bit-identical results; any change here must be replayed there.  Inputs are
never mutated.  All loops run over plain float lists: for the small systems
a rating run needs this is fast enough, and it keeps the arithmetic order
under our control.
"""

from __future__ import annotations

import math

import numpy as np

from rank_forge.errors import ConvergenceError, SingularMatrixError


def gauss_solve(a: np.ndarray, b: np.ndarray, tol_pivot: float) -> np.ndarray:
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting.

    Raises SingularMatrixError when the best available pivot has absolute
    value below ``tol_pivot``.
    """
    n = len(b)
    rows = [list(map(float, row)) for row in a]
    rhs = [float(v) for v in b]

    for k in range(n):
        piv = k
        best = abs(rows[k][k])
        for i in range(k + 1, n):
            v = abs(rows[i][k])
            if v > best:
                best = v
                piv = i
        if best < tol_pivot:
            raise SingularMatrixError(pivot_index=k)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            rhs[k], rhs[piv] = rhs[piv], rhs[k]
        row_k = rows[k]
        pivot = row_k[k]
        for i in range(k + 1, n):
            row_i = rows[i]
            factor = row_i[k] / pivot
            if factor != 0.0:
                row_i[k] = 0.0
                for j in range(k + 1, n):
                    row_i[j] -= factor * row_k[j]
                rhs[i] -= factor * rhs[k]

    x = [0.0] * n
    for k in range(n - 1, -1, -1):
        s = rhs[k]
        row_k = rows[k]
        for j in range(k + 1, n):
            s -= row_k[j] * x[j]
        x[k] = s / row_k[k]
    return np.array(x, dtype=np.float64)


def _offdiag_norm(rows: list[list[float]], n: int) -> float:
    s = 0.0
    for i in range(n):
        row = rows[i]
        for j in range(n):
            if i != j:
                s += row[j] * row[j]
    return math.sqrt(s)


def jacobi_eigenvalues(a: np.ndarray, tol: float, max_sweeps: int) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by the cyclic Jacobi method.

    Sweeps until the off-diagonal Frobenius mass drops below ``tol``;
    raises ConvergenceError if that takes more than ``max_sweeps`` sweeps.
    Returns the eigenvalues sorted ascending.
    """
    n = len(a)
    rows = [list(map(float, row)) for row in a]

    for _ in range(max_sweeps):
        if _offdiag_norm(rows, n) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = rows[p][q]
                if apq == 0.0:
                    continue
                theta = (rows[q][q] - rows[p][p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                rows[p][p] -= t * apq
                rows[q][q] += t * apq
                rows[p][q] = 0.0
                rows[q][p] = 0.0
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = rows[i][p]
                    aiq = rows[i][q]
                    new_ip = aip - s * (aiq + tau * aip)
                    new_iq = aiq + s * (aip - tau * aiq)
                    rows[i][p] = new_ip
                    rows[p][i] = new_ip
                    rows[i][q] = new_iq
                    rows[q][i] = new_iq
    if _offdiag_norm(rows, n) >= tol:
        raise ConvergenceError(f"Jacobi sweep limit {max_sweeps} reached before convergence")
    return np.sort(np.array([rows[i][i] for i in range(n)], dtype=np.float64))
