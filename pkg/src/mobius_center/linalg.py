"""Small dense linear algebra with explicit pivoting.

Matrices here are tiny (n is typically 2..8), so a hand-rolled partial-pivot
LU is cheap and lets the determinant sign and the singularity test follow one
code path.
"""

import numpy as np

from .errors import SingularMatrix

SINGULAR_RTOL = 1e-12


def _lu(m):
    """Partial-pivot LU of a square matrix.

    Returns ``(lu, perm, sign)``: ``lu`` is a list of rows packing the
    unit-lower factor below the diagonal and the upper factor on and above it,
    ``perm`` the row permutation and ``sign`` its parity. Columns whose pivot
    is exactly zero are skipped. Works on Python floats, which beats numpy
    call overhead at these sizes.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    lu = a.tolist()
    perm = list(range(n))
    sign = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(lu[i][k]))
        if p != k:
            lu[k], lu[p] = lu[p], lu[k]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        row_k = lu[k]
        pivot = row_k[k]
        if pivot == 0.0:
            continue
        for i in range(k + 1, n):
            row = lu[i]
            factor = row[k] / pivot
            row[k] = factor
            if factor != 0.0:
                for j in range(k + 1, n):
                    row[j] -= factor * row_k[j]
    return lu, perm, sign


def determinant(m):
    """Determinant via partial-pivot LU; exactly 0.0 for a zero pivot."""
    lu, _, det = _lu(m)
    for i in range(len(lu)):
        det *= lu[i][i]
    return float(det)


def solve_linear(m, rhs):
    """Solve ``m @ x = rhs``.

    Raises:
        SingularMatrix: if some pivot falls below ``1e-12`` times the largest
            entry magnitude of ``m``.
    """
    m = np.asarray(m, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = m.shape[0]
    if rhs.shape != (n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({n},)")
    lu, perm, _ = _lu(m)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    min_pivot = min((abs(lu[i][i]) for i in range(n)), default=0.0)
    if scale == 0.0 or min_pivot < SINGULAR_RTOL * scale:
        raise SingularMatrix(f"matrix is singular to working precision (min pivot {min_pivot:.3g}, scale {scale:.3g})")
    y = [float(rhs[p]) for p in perm]
    for i in range(n):
        row = lu[i]
        y[i] -= sum(row[j] * y[j] for j in range(i))
    for i in range(n - 1, -1, -1):
        row = lu[i]
        y[i] = (y[i] - sum(row[j] * y[j] for j in range(i + 1, n))) / row[i]
    return np.array(y)


def is_skew_symmetric_shifted(m, tol):
    """Whether ``m - (tr m / n) I`` is skew-symmetric to within ``tol``."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    shifted = m - (np.trace(m) / n) * np.eye(n)
    return bool(np.max(np.abs(shifted + shifted.T)) <= tol)
