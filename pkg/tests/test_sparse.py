"""CSR structure, kernels, generators and Matrix Market round trips."""

import numpy as np
import pytest

from vqls_precond import (CsrMatrix, DensityTooLowError, load_matrix_market, lu_solve,
                          poisson_1d, random_rhs, random_sparse, save_matrix_market)


def csr_from_dense(A):
    return CsrMatrix.from_dense(np.asarray(A, dtype=float))


def test_spmv_identity():
    A = CsrMatrix.identity(3)
    np.testing.assert_array_equal(A.matvec([1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])


def test_spmv_with_empty_row():
    A = csr_from_dense([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_array_equal(A.matvec([5.0, 7.0]), [7.0, 0.0])


def test_spmv_matches_dense_oracle():
    A = random_sparse(128, 0.2, seed=5)
    x = np.ones(128)
    assert np.abs(A.matvec(x) - A.to_dense() @ x).max() < 1e-12


def test_spmv_dimension_mismatch():
    with pytest.raises(ValueError):
        CsrMatrix.identity(3).matvec(np.ones(4))


def test_transpose_trivial():
    np.testing.assert_array_equal(CsrMatrix.identity(3).transpose().to_dense(), np.eye(3))
    A = csr_from_dense([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_array_equal(A.transpose().to_dense(), [[0.0, 0.0], [1.0, 0.0]])


def test_transpose_matches_dense_and_is_involution():
    A = random_sparse(64, 0.15, seed=9)
    At = A.transpose()
    np.testing.assert_array_equal(At.to_dense(), A.to_dense().T)
    Att = At.transpose()
    np.testing.assert_array_equal(Att.row_ptr, A.row_ptr)
    np.testing.assert_array_equal(Att.col_idx, A.col_idx)
    np.testing.assert_array_equal(Att.vals, A.vals)


def test_csr_validation():
    with pytest.raises(ValueError):
        CsrMatrix(2, np.array([0, 1, 1]), np.array([0, 0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):  # decreasing columns within a row
        CsrMatrix(2, np.array([0, 2, 2]), np.array([1, 0]), np.array([1.0, 2.0]))


def test_random_sparse_has_full_diagonal():
    A = random_sparse(128, 0.2, seed=1)
    dense = A.to_dense()
    assert np.all(dense[np.arange(128), np.arange(128)] != 0.0)
    row_of = np.repeat(np.arange(128), np.diff(A.row_ptr))
    assert np.sum(row_of == A.col_idx) == 128


def test_random_sparse_nnz_within_binomial_bounds():
    # expected off-diagonal count 3148.8, six-sigma band precomputed from
    # binomial(16256, p') around total mean 3276.8
    A = random_sparse(128, 0.2, seed=1)
    assert 3000 <= A.nnz <= 3560


def test_random_sparse_deterministic():
    A = random_sparse(128, 0.2, seed=77)
    B = random_sparse(128, 0.2, seed=77)
    np.testing.assert_array_equal(A.row_ptr, B.row_ptr)
    np.testing.assert_array_equal(A.col_idx, B.col_idx)
    np.testing.assert_array_equal(A.vals, B.vals)
    C = random_sparse(128, 0.2, seed=78)
    assert not np.array_equal(A.vals, C.vals)


def test_random_sparse_offdiagonal_values_in_range():
    A = random_sparse(100, 0.2, seed=3)
    row_of = np.repeat(np.arange(100), np.diff(A.row_ptr))
    off = A.vals[row_of != A.col_idx]
    assert np.all(np.abs(off) <= 1.0)
    diag = A.vals[row_of == A.col_idx]
    assert np.all(np.abs(diag) >= 3.0) and np.all(np.abs(diag) <= 4.0)


def test_random_sparse_density_too_low():
    with pytest.raises(DensityTooLowError):
        random_sparse(100, 0.005, seed=0)


def test_random_rhs_range_and_determinism():
    b = random_rhs(1000, seed=4)
    assert np.all(np.abs(b) <= 1.0)
    np.testing.assert_array_equal(b, random_rhs(1000, seed=4))


def test_random_rhs_moments():
    # U(-1,1): mean 0, variance 1/3; bounds are five-sigma for n = 1e4
    b = random_rhs(10_000, seed=12)
    assert abs(b.mean()) < 0.03
    assert 0.30 < b.var(ddof=1) < 0.37


def test_random_rhs_stream_independent_of_matrix():
    A = random_sparse(64, 0.2, seed=21)
    b_after = random_rhs(64, seed=21)
    b_alone = random_rhs(64, seed=21)
    np.testing.assert_array_equal(b_after, b_alone)
    # and not a prefix of the matrix value stream
    assert not np.array_equal(np.sort(b_alone), np.sort(A.vals[:64]))


def test_poisson_1d_small():
    A, b = poisson_1d(3, heat_rate=1.0, length=4.0)
    np.testing.assert_array_equal(A.to_dense(), [[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    np.testing.assert_array_equal(b, [1.0, 1.0, 1.0])
    np.testing.assert_allclose(lu_solve(A.to_dense(), b), [1.5, 2.0, 1.5], atol=1e-14)


def test_poisson_1d_single_node():
    A, b = poisson_1d(1, heat_rate=2.0, length=1.0)
    np.testing.assert_array_equal(A.to_dense(), [[2.0]])
    assert b[0] == pytest.approx(2.0 * 0.25)


def test_poisson_1d_matches_parabola_at_scale():
    # the 3-point stencil reproduces quadratics exactly at the nodes
    n, L, f = 128, 1.0, 1.0
    A, b = poisson_1d(n, heat_rate=f, length=L)
    u = lu_solve(A.to_dense(), b)
    xs = np.arange(1, n + 1) * (L / (n + 1))
    exact = f * xs * (L - xs) / 2.0
    assert np.abs(u - exact).max() / np.abs(exact).max() < 1e-10


def test_poisson_1d_spd_known_spectrum():
    n = 128
    A, _ = poisson_1d(n)
    eigs = np.sort(np.linalg.eigvalsh(A.to_dense()))
    assert eigs[0] > 0.0
    k = np.arange(1, n + 1)
    expected = np.sort(2.0 - 2.0 * np.cos(k * np.pi / (n + 1)))
    np.testing.assert_allclose(eigs, expected, atol=1e-10)


def test_to_dense_round_trip():
    A = random_sparse(32, 0.3, seed=8)
    row_of = np.repeat(np.arange(32), np.diff(A.row_ptr))
    np.testing.assert_array_equal(A.to_dense()[row_of, A.col_idx], A.vals)


def test_matrix_market_round_trip(tmp_path):
    A = random_sparse(40, 0.2, seed=19)
    path = tmp_path / "instance.mtx"
    save_matrix_market(A, path)
    B = load_matrix_market(path)
    np.testing.assert_array_equal(A.row_ptr, B.row_ptr)
    np.testing.assert_array_equal(A.col_idx, B.col_idx)
    np.testing.assert_array_equal(A.vals, B.vals)


def test_matrix_market_stored_zero_survives(tmp_path):
    A = CsrMatrix(2, np.array([0, 2, 3]), np.array([0, 1, 1]), np.array([1.0, 0.0, 2.0]))
    path = tmp_path / "z.mtx"
    save_matrix_market(A, path)
    B = load_matrix_market(path)
    assert B.nnz == 3 and B.vals[1] == 0.0


def test_matrix_market_rejects_garbage(tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("%%MatrixMarket matrix array real general\n2 2 1\n1 1 1.0\n")
    with pytest.raises(ValueError):
        load_matrix_market(path)
