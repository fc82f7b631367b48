# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: pivoted elimination and cyclic Jacobi.

Twin of ``_pykernels.py``: the loop structure and arithmetic order are kept
identical so both backends return bit-identical results.  Inputs are never
mutated (work happens on copies).
"""

from libc.math cimport fabs, sqrt

import numpy as np

from rank_forge.errors import ConvergenceError, SingularMatrixError


def gauss_solve(a, b, double tol_pivot):
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting."""
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef double[::1] rhs = np.array(b, dtype=np.float64)
    cdef Py_ssize_t n = rhs.shape[0]
    cdef Py_ssize_t i, j, k, piv
    cdef double best, v, pivot, factor, tmp, s

    for k in range(n):
        piv = k
        best = fabs(m[k, k])
        for i in range(k + 1, n):
            v = fabs(m[i, k])
            if v > best:
                best = v
                piv = i
        if best < tol_pivot:
            raise SingularMatrixError(pivot_index=k)
        if piv != k:
            for j in range(n):
                tmp = m[k, j]
                m[k, j] = m[piv, j]
                m[piv, j] = tmp
            tmp = rhs[k]
            rhs[k] = rhs[piv]
            rhs[piv] = tmp
        pivot = m[k, k]
        for i in range(k + 1, n):
            factor = m[i, k] / pivot
            if factor != 0.0:
                m[i, k] = 0.0
                for j in range(k + 1, n):
                    m[i, j] -= factor * m[k, j]
                rhs[i] -= factor * rhs[k]

    x = np.zeros(n, dtype=np.float64)
    cdef double[::1] xv = x
    for k in range(n - 1, -1, -1):
        s = rhs[k]
        for j in range(k + 1, n):
            s -= m[k, j] * xv[j]
        xv[k] = s / m[k, k]
    return x


cdef double _offdiag_norm(double[:, ::1] m, Py_ssize_t n):
    cdef double s = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if i != j:
                s += m[i, j] * m[i, j]
    return sqrt(s)


def jacobi_eigenvalues(a, double tol, int max_sweeps):
    """Eigenvalues of a symmetric matrix by the cyclic Jacobi method."""
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p, q, i, sweep
    cdef double apq, theta, sign, t, c, s, tau, aip, aiq, new_ip, new_iq

    for sweep in range(max_sweeps):
        if _offdiag_norm(m, n) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (fabs(theta) + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                m[p, p] -= t * apq
                m[q, q] += t * apq
                m[p, q] = 0.0
                m[q, p] = 0.0
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = m[i, p]
                    aiq = m[i, q]
                    new_ip = aip - s * (aiq + tau * aip)
                    new_iq = aiq + s * (aip - tau * aiq)
                    m[i, p] = new_ip
                    m[p, i] = new_ip
                    m[i, q] = new_iq
                    m[q, i] = new_iq
    if _offdiag_norm(m, n) >= tol:
        raise ConvergenceError(f"Jacobi sweep limit {max_sweeps} reached before convergence")
    cdef Py_ssize_t k
    diag = np.empty(n, dtype=np.float64)
    cdef double[::1] dv = diag
    for k in range(n):
        dv[k] = m[k, k]
    return np.sort(diag)
