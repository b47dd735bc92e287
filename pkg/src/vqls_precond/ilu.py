"""Zero-fill incomplete LU factorization and preconditioner application.

The factorization runs IKJ Gaussian elimination restricted to the stored
pattern of A: updates landing outside the pattern are discarded, so L and U
together occupy exactly the pattern of A (L's unit diagonal is implicit and
never stored). On patterns where elimination creates no fill, the result is
the exact LU factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sparse import CsrMatrix

PIVOT_FLOOR = 1e-12


class ZeroPivotError(RuntimeError):
    """A diagonal pivot fell below the floor during elimination.

    No perturbation is applied; the caller decides how to proceed (the
    experiment harness redraws the instance under the next seed).
    """

    def __init__(self, row: int, value: float):
        super().__init__(f"pivot |u[{row},{row}]| = {abs(value):.3e} below {PIVOT_FLOOR:g}")
        self.row = row
        self.value = value


@dataclass
class IluFactors:
    """L strictly lower (unit diagonal implicit) and U upper including diagonal."""

    L: CsrMatrix
    U: CsrMatrix


def ilu0(A: CsrMatrix) -> IluFactors:
    """Incomplete LU with zero fill on the pattern of A.

    Requires every diagonal position to be stored. Defining property:
    (L U)[i, j] equals A[i, j] exactly for every stored (i, j).
    """
    n = A.n
    work = A.vals.copy()
    diag_pos = np.empty(n, dtype=np.int64)
    for i in range(n):
        lo, hi = A.row_ptr[i], A.row_ptr[i + 1]
        pos = np.searchsorted(A.col_idx[lo:hi], i)
        if pos == hi - lo or A.col_idx[lo + pos] != i:
            raise ValueError(f"diagonal position ({i},{i}) missing from the pattern")
        diag_pos[i] = lo + pos

    for i in range(n):
        lo, hi = A.row_ptr[i], A.row_ptr[i + 1]
        cols_i = A.col_idx[lo:hi]
        row_i = work[lo:hi]
        n_lower = int(np.searchsorted(cols_i, i))
        for t in range(n_lower):
            k = cols_i[t]
            u_kk = work[diag_pos[k]]
            if abs(u_kk) < PIVOT_FLOOR:
                raise ZeroPivotError(int(k), float(u_kk))
            l_ik = row_i[t] / u_kk
            row_i[t] = l_ik
            # subtract l_ik * U[k, j] wherever row i stores a j > k
            k_up_lo, k_up_hi = diag_pos[k] + 1, A.row_ptr[k + 1]
            cols_k = A.col_idx[k_up_lo:k_up_hi]
            pos = np.searchsorted(cols_i, cols_k)
            hit = (pos < hi - lo)
            hit[hit] = cols_i[pos[hit]] == cols_k[hit]
            row_i[pos[hit]] -= l_ik * work[k_up_lo:k_up_hi][hit]
        if abs(work[diag_pos[i]]) < PIVOT_FLOOR:
            raise ZeroPivotError(i, float(work[diag_pos[i]]))

    return IluFactors(L=_take_lower(A, work, diag_pos), U=_take_upper(A, work, diag_pos))


def _take_lower(A: CsrMatrix, work: np.ndarray, diag_pos: np.ndarray) -> CsrMatrix:
    row_ptr = np.zeros(A.n + 1, dtype=np.int64)
    cols, vals = [], []
    for i in range(A.n):
        lo = A.row_ptr[i]
        cols.append(A.col_idx[lo:diag_pos[i]])
        vals.append(work[lo:diag_pos[i]])
        row_ptr[i + 1] = row_ptr[i] + (diag_pos[i] - lo)
    return CsrMatrix(A.n, row_ptr, np.concatenate(cols), np.concatenate(vals))


def _take_upper(A: CsrMatrix, work: np.ndarray, diag_pos: np.ndarray) -> CsrMatrix:
    row_ptr = np.zeros(A.n + 1, dtype=np.int64)
    cols, vals = [], []
    for i in range(A.n):
        hi = A.row_ptr[i + 1]
        cols.append(A.col_idx[diag_pos[i]:hi])
        vals.append(work[diag_pos[i]:hi])
        row_ptr[i + 1] = row_ptr[i] + (hi - diag_pos[i])
    return CsrMatrix(A.n, row_ptr, np.concatenate(cols), np.concatenate(vals))


def apply_minv(factors: IluFactors, v) -> np.ndarray:
    """x = U^-1 (L^-1 v) by sparse forward then backward substitution."""
    v = np.asarray(v, dtype=float)
    if v.shape != (factors.U.n,):
        raise ValueError(f"vector length {v.shape} does not match n={factors.U.n}")
    return _usolve(factors.U, _lsolve(factors.L, v))


def _lsolve(L: CsrMatrix, v: np.ndarray) -> np.ndarray:
    """Forward substitution with implicit unit diagonal; v may be (n,) or (n, m)."""
    x = np.array(v, dtype=float)
    for i in range(L.n):
        cols, vals = L.row(i)
        if len(cols):
            x[i] -= vals @ x[cols]
    return x


def _usolve(U: CsrMatrix, v: np.ndarray) -> np.ndarray:
    """Backward substitution; row diagonals are the leading stored entries."""
    x = np.array(v, dtype=float)
    for i in range(U.n - 1, -1, -1):
        cols, vals = U.row(i)
        if len(cols) > 1:
            x[i] -= vals[1:] @ x[cols[1:]]
        x[i] /= vals[0]
    return x


def preconditioned_system(A: CsrMatrix, b, factors: IluFactors):
    """Assemble (M^-1 A, M^-1 b) with M = L U from the incomplete factors.

    M^-1 A is generally dense, so it is materialized column by column as
    apply_minv(F, A e_j); at workbench sizes (n <= 256) that is cheap and the
    downstream cost function and spectrum reports want dense access anyway.
    """
    b = np.asarray(b, dtype=float)
    A_tilde = _usolve(factors.U, _lsolve(factors.L, A.to_dense()))
    b_tilde = apply_minv(factors, b)
    return A_tilde, b_tilde
