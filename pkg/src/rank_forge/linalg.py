"""Dense symmetric-system solver and small symmetric eigensolver.

The heavy loops live in a compiled extension (``rank_forge._core``) with a
pure-Python twin (``rank_forge._pykernels``) selected at import time.  Set
``RANK_FORGE_KERNELS=python`` to force the fallback, ``compiled`` to require
the extension, or leave unset/``auto`` to prefer the extension when built.
Both backends are deterministic and produce bit-identical results.
"""

from __future__ import annotations

import os

import numpy as np

from rank_forge.errors import NotSymmetricError

_requested = os.environ.get("RANK_FORGE_KERNELS", "auto").strip().lower() or "auto"
if _requested in ("auto", "compiled", "c"):
    try:
        from rank_forge import _core as _kernels

        KERNEL_BACKEND = "compiled"
    except ImportError:
        if _requested != "auto":
            raise
        from rank_forge import _pykernels as _kernels

        KERNEL_BACKEND = "python"
elif _requested in ("python", "py", "pure"):
    from rank_forge import _pykernels as _kernels

    KERNEL_BACKEND = "python"
else:
    raise ImportError(
        f"RANK_FORGE_KERNELS={_requested!r} not understood; use 'auto', 'compiled' or 'python'"
    )

# Defaults sized for double precision and at most a few hundred teams.
TOL_RESIDUAL = 1e-9
TOL_EIG = 1e-10
TOL_SYM = 1e-10
MAX_SWEEPS = 100


def as_dense_matrix(a, *, square: bool = False) -> np.ndarray:
    """Validate and coerce to a finite float64 matrix (C order)."""
    m = np.array(a, dtype=np.float64, order="C")
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if m.size == 0:
        raise ValueError("empty matrix")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def as_dense_vector(v) -> np.ndarray:
    """Validate and coerce to a finite float64 vector."""
    x = np.array(v, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got ndim={x.ndim}")
    if not np.isfinite(x).all():
        raise ValueError("vector entries must be finite")
    return x


def pivot_tolerance(a: np.ndarray) -> float:
    """Pivot cutoff below which elimination treats the matrix as singular."""
    return 1e-12 * (1.0 + float(np.abs(a).max()))


def solve_dense(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for square ``a`` via partial-pivoted elimination.

    Deterministic for identical inputs.  Raises SingularMatrixError when a
    pivot falls below ``pivot_tolerance(a)``.
    """
    m = as_dense_matrix(a, square=True)
    rhs = as_dense_vector(b)
    if rhs.shape[0] != m.shape[0]:
        raise ValueError(f"rhs length {rhs.shape[0]} does not match matrix order {m.shape[0]}")
    return _kernels.gauss_solve(m, rhs, pivot_tolerance(m))


def symmetric_eigenvalues(a, *, tol: float = TOL_EIG, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi.

    Sweeps until the off-diagonal Frobenius mass is below ``tol``.  Raises
    NotSymmetricError for asymmetric input and ConvergenceError when the
    sweep budget is exhausted.
    """
    m = as_dense_matrix(a, square=True)
    if np.abs(m - m.T).max() > TOL_SYM:
        raise NotSymmetricError(f"matrix is not symmetric within {TOL_SYM}")
    return _kernels.jacobi_eigenvalues(m, tol, max_sweeps)
