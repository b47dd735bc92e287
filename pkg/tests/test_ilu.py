"""Zero-fill incomplete factorization: exactness on the pattern, substitution,
preconditioned-system assembly and the dense-LU oracle on no-fill patterns."""

import numpy as np
import pytest

from vqls_precond import (CsrMatrix, ZeroPivotError, apply_minv, condition_number,
                          ilu0, lu_solve, preconditioned_system, random_rhs,
                          random_sparse)

SEEDS = list(range(1, 11))


def dense_restricted_elimination(A, pattern):
    """Independent reference: dense IKJ elimination discarding updates off-pattern."""
    n = A.shape[0]
    W = A.copy()
    for i in range(n):
        for k in range(i):
            if not pattern[i, k]:
                continue
            l = W[i, k] / W[k, k]
            W[i, k] = l
            for j in range(k + 1, n):
                if pattern[i, j] and pattern[k, j]:
                    W[i, j] -= l * W[k, j]
    return np.tril(W, -1) * pattern, np.triu(W) * pattern


def reassemble(factors, n):
    return (np.eye(n) + factors.L.to_dense()) @ factors.U.to_dense()


def test_ilu0_diagonal_matrix():
    A = CsrMatrix.from_dense(np.diag([2.0, -3.0, 5.0]), keep_zeros=False)
    F = ilu0(A)
    assert F.L.nnz == 0
    np.testing.assert_array_equal(F.U.to_dense(), np.diag([2.0, -3.0, 5.0]))


def test_ilu0_dense_2x2_hand_elimination():
    A = CsrMatrix.from_dense(np.array([[4.0, 3.0], [6.0, 3.0]]))
    F = ilu0(A)
    np.testing.assert_allclose(F.L.to_dense(), [[0.0, 0.0], [1.5, 0.0]], atol=0)
    np.testing.assert_allclose(F.U.to_dense(), [[4.0, 3.0], [0.0, -1.5]], atol=0)


def test_ilu0_no_fill_pattern_equals_lu():
    A_dense = np.array([[2.0, 0.0, 1.0], [0.0, 3.0, 0.0], [1.0, 0.0, 2.0]])
    A = CsrMatrix.from_dense(A_dense)
    F = ilu0(A)
    assert F.L.to_dense()[2, 0] == pytest.approx(0.5)
    assert F.U.to_dense()[2, 2] == pytest.approx(1.5)
    assert np.abs(reassemble(F, 3) - A_dense).max() < 1e-15


def test_ilu0_matches_dense_reference():
    rng = np.random.default_rng(123)
    for _ in range(30):
        n = int(rng.integers(3, 12))
        mask = rng.random((n, n)) < 0.4
        np.fill_diagonal(mask, True)
        A_dense = np.where(mask, rng.uniform(-1, 1, (n, n)), 0.0)
        d = np.diag(A_dense).copy()
        A_dense[np.arange(n), np.arange(n)] = np.where(d >= 0, d + 2.0, d - 2.0)
        L_ref, U_ref = dense_restricted_elimination(A_dense, mask)
        F = ilu0(CsrMatrix.from_mask(mask, A_dense[mask]))
        np.testing.assert_allclose(F.L.to_dense(), L_ref, atol=1e-13)
        np.testing.assert_allclose(F.U.to_dense(), U_ref, atol=1e-13)


def test_ilu0_pattern_exactness_at_scale():
    for seed in SEEDS[:3]:
        A = random_sparse(128, 0.2, seed)
        dense = A.to_dense()
        F = ilu0(A)
        prod = reassemble(F, 128)
        mask = dense != 0.0
        assert np.abs(prod - dense)[mask].max() < 1e-10 * np.abs(dense).max()


def test_ilu0_zero_fill_in():
    A = random_sparse(64, 0.2, seed=2)
    F = ilu0(A)
    dense = A.to_dense()
    strict_lower = (F.L.to_dense() != 0.0)
    upper = (F.U.to_dense() != 0.0)
    assert not np.any(strict_lower & (dense == 0.0))
    assert not np.any(upper & (dense == 0.0))
    assert not np.any(np.triu(strict_lower))
    assert not np.any(np.tril(upper, -1))


def test_ilu0_requires_diagonal_in_pattern():
    A = CsrMatrix.from_dense(np.array([[0.0, 1.0], [1.0, 0.0]]))  # no diagonal stored
    with pytest.raises(ValueError):
        ilu0(A)


def test_ilu0_zero_pivot_raises_with_row():
    # structurally stored zero pivot: pattern membership is not value-based
    A = CsrMatrix(2, np.array([0, 2, 4]), np.array([0, 1, 0, 1]),
                  np.array([0.0, 1.0, 1.0, 1.0]))
    with pytest.raises(ZeroPivotError) as info:
        ilu0(A)
    assert info.value.row == 0


def test_ilu0_pivot_lost_during_elimination():
    # exact cancellation: u_11 = 1 - 2*0.5 = 0
    A = CsrMatrix.from_dense(np.array([[2.0, 1.0], [1.0, 0.5]]))
    with pytest.raises(ZeroPivotError) as info:
        ilu0(A)
    assert info.value.row == 1


def test_apply_minv_identity_and_diagonal():
    F = ilu0(CsrMatrix.identity(4))
    v = np.array([1.0, -2.0, 3.0, 4.0])
    np.testing.assert_array_equal(apply_minv(F, v), v)
    F2 = ilu0(CsrMatrix.from_dense(np.diag([2.0, 4.0])))
    np.testing.assert_array_equal(apply_minv(F2, np.array([2.0, 4.0])), [1.0, 1.0])


def test_apply_minv_full_pattern_equals_dense_solve():
    A_dense = np.array([[4.0, 3.0], [6.0, 3.0]])
    F = ilu0(CsrMatrix.from_dense(A_dense))
    v = np.array([1.0, 0.0])
    np.testing.assert_allclose(apply_minv(F, v), lu_solve(A_dense, v), atol=1e-14)


def test_preconditioned_system_identity():
    A = CsrMatrix.identity(5)
    b = np.arange(1.0, 6.0)
    A_tilde, b_tilde = preconditioned_system(A, b, ilu0(A))
    np.testing.assert_array_equal(A_tilde, np.eye(5))
    np.testing.assert_array_equal(b_tilde, b)


def test_preconditioned_system_full_pattern_is_exact():
    rng = np.random.default_rng(6)
    A_dense = rng.uniform(-1, 1, (12, 12)) + np.diag(rng.choice([-4.0, 4.0], 12))
    A = CsrMatrix.from_dense(A_dense, keep_zeros=True)
    b = rng.uniform(-1, 1, 12)
    A_tilde, b_tilde = preconditioned_system(A, b, ilu0(A))
    assert np.abs(A_tilde - np.eye(12)).max() < 1e-8
    np.testing.assert_allclose(b_tilde, lu_solve(A_dense, b), rtol=1e-10, atol=1e-12)


def normalized(v):
    return v / np.linalg.norm(v)


def test_solution_preserved_under_preconditioning():
    for seed in SEEDS[:3]:
        A = random_sparse(128, 0.2, seed)
        b = random_rhs(128, seed)
        A_tilde, b_tilde = preconditioned_system(A, b, ilu0(A))
        x = normalized(lu_solve(A.to_dense(), b))
        x_tilde = normalized(lu_solve(A_tilde, b_tilde))
        if x @ x_tilde < 0:
            x_tilde = -x_tilde
        assert np.abs(x - x_tilde).max() < 1e-6


def test_condition_number_improves_for_committed_seeds():
    improved = 0
    for seed in SEEDS:
        A = random_sparse(128, 0.2, seed)
        b = random_rhs(128, seed)
        A_tilde, _ = preconditioned_system(A, b, ilu0(A))
        if condition_number(A_tilde) <= condition_number(A.to_dense()):
            improved += 1
    assert improved >= 9
