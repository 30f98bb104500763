import numpy as np
import pytest

from krylovium.matf import DenseMatrix
from krylovium.orderbasis import determinant
from krylovium.lifting import newton_series_inverse
from krylovium.poly import NEG_INF, Poly
from krylovium.polmat import (PolyMatrix, cdeg, coeff, col_reverse, col_truncate, eval_at_zero,
                              expand_columns, hstack, is_column_reduced, leading_matrix,
                              partial_linearization, pm_add, pm_mul)
from krylovium.utils import make_rng, random_poly_matrix

PRIMES = [2, 3, 97, 2**62 - 57]


def PM(rows, p=97):
    """Polynomial matrix from rows of coefficient lists (low to high)."""
    return PolyMatrix.from_polys([[Poly(c, p) for c in row] for row in rows], p)


def test_cdeg():
    assert cdeg(PolyMatrix.identity(2, 97)) == (0, 0)
    assert cdeg(PM([[[0, 0, 1], []], [[0, 1], []]])) == (2, NEG_INF)
    assert cdeg(PolyMatrix.zeros(2, 3, 97)).total == 0


def test_col_truncate():
    M = PM([[[1, 1], [1, 2, 3]]])
    assert col_truncate(M, (0, 0)).is_zero()
    assert col_truncate(PM([[[1, 1]]]), (1,)) == PM([[[1]]])
    assert col_truncate(M, (1, 2)) == PM([[[1], [1, 2]]])


def test_eval_and_coeff():
    A = DenseMatrix.from_rows([[1, 2], [3, 4]], 97)
    pencil = PolyMatrix.from_coefficients([DenseMatrix.identity(2, 97), -A])
    assert eval_at_zero(pencil) == DenseMatrix.identity(2, 97)
    assert coeff(pencil, 1) == -A
    assert coeff(pencil, 5) == DenseMatrix.zeros(2, 2, 97)
    series = newton_series_inverse(PM([[[1, 96]]]), 4)
    assert coeff(series, 0) == DenseMatrix.from_rows([[1]], 97)


@pytest.mark.parametrize("p", PRIMES)
def test_pm_mul_matches_entrywise(p):
    rng = make_rng(2)
    M = random_poly_matrix(rng, p, 2, 3, 3)
    N = random_poly_matrix(rng, p, 3, 2, 2)
    prod = pm_mul(M, N)
    for i in range(2):
        for j in range(2):
            expected = Poly.zero(p)
            for k in range(3):
                expected = expected + M[i, k] * N[k, j]
            assert prod[i, j] == expected
    assert pm_add(prod, -prod).is_zero()


def test_expand_columns():
    assert expand_columns(PM([[[1, 2]]]), (2,)) == DenseMatrix.from_rows([[1, 2]], 97)
    assert expand_columns(PM([[[1, 2]]]), (0,)).shape == (1, 0)
    M = PM([[[1, 2], [3]], [[4], [5, 6, 7]]])
    assert expand_columns(M, (3, 1)).tolist() == [[1, 2, 0, 3], [4, 0, 0, 5]]


def test_leading_matrix_and_reducedness():
    assert leading_matrix(PolyMatrix.identity(3, 97)) == DenseMatrix.identity(3, 97)
    assert is_column_reduced(PolyMatrix.identity(3, 97))
    v = PM([[[0, 1]], [[0, 1]]])
    assert leading_matrix(v).tolist() == [[1], [1]]
    assert is_column_reduced(v)
    assert not is_column_reduced(PM([[[0, 1], [0, 1]], [[0, 1], [0, 1]]]))
    with pytest.raises(ValueError):
        is_column_reduced(PM([[[1], []]]))


def test_col_reverse():
    I3 = PolyMatrix.identity(3, 97)
    assert col_reverse(I3, (0, 0, 0)) == I3
    assert col_reverse(PM([[[1, 1]]]), (1,)) == PM([[[1, 1]]])
    assert col_reverse(PM([[[2, 1]]]), (1,)) == PM([[[1, 2]]])
    assert col_reverse(PM([[[3]]]), (2,)) == PM([[[0, 0, 3]]])
    with pytest.raises(ValueError):
        col_reverse(PM([[[1, 1, 1]]]), (1,))


def test_partial_linearization_constant():
    I = PolyMatrix.identity(3, 97)
    P_bar, t, m_bar = partial_linearization(I)
    assert P_bar == I and t == 0 and m_bar == 3


@pytest.mark.parametrize("p", [2, 97, 2**62 - 57])
def test_partial_linearization_preserves_det_and_inverse(p):
    rng = make_rng(17)
    for trial in range(4):
        m = 3
        P = random_poly_matrix(rng, p, m, m, 0, unit_constant=True, col_degrees=[5, 0, 1])
        P_bar, t, m_bar = partial_linearization(P)
        assert P_bar.degree <= t
        assert m_bar >= m
        assert determinant(P_bar) == determinant(P)
        order = 2 * (cdeg(P).total + 1)
        inv_bar = newton_series_inverse(P_bar, order)
        assert inv_bar[:m, :m] == newton_series_inverse(P, order)


def test_getitem_and_shift():
    M = PM([[[1, 2], [3]], [[4], [5, 6, 7]]])
    assert M[1, 1] == Poly([5, 6, 7], 97)
    assert M[:, [1]].shape == (2, 1)
    assert M.shift(2).div_x(2) == M
    assert M.rem_x(1) == PolyMatrix(np.array([[[1], [3]], [[4], [5]]]), 97)


@pytest.mark.parametrize("p", PRIMES)
def test_truncation_compatibility(p):
    rng = make_rng(101)
    for _ in range(10):
        A = random_poly_matrix(rng, p, 3, 4, int(rng.integers(0, 5)))
        B = random_poly_matrix(rng, p, 4, 3, 0, col_degrees=[int(v) for v in rng.integers(0, 7, size=3)])
        C = random_poly_matrix(rng, p, 4, 3, 4)
        d = [int(v) for v in rng.integers(0, 8, size=3)]
        e = [int(v) for v in rng.integers(0, 8, size=3)]
        assert col_truncate(pm_mul(A, col_truncate(B, d)), d) == col_truncate(pm_mul(A, B), d)
        assert col_truncate(col_truncate(B, d), e) == col_truncate(B, [min(a, b) for a, b in zip(d, e)])
        assert col_truncate(B, d) + col_truncate(C, d) == col_truncate(B + C, d)
        assert col_truncate(B, [B.length] * 3) == B


@pytest.mark.parametrize("p", [2, 3, 97])
def test_column_reducedness_ignores_column_order(p):
    rng = make_rng(103)
    seen = set()
    for _ in range(15):
        M = random_poly_matrix(rng, p, 4, 3, 0, col_degrees=[int(v) for v in rng.integers(0, 4, size=3)])
        if any(dj == NEG_INF for dj in cdeg(M)):
            continue
        # a column whose leading vector repeats the first column's
        N = hstack([M, M[:, [0]].shift(2)])
        for X in (M, N):
            reduced = is_column_reduced(X)
            seen.add(reduced)
            for _ in range(3):
                perm = [int(j) for j in rng.permutation(X.cols)]
                assert is_column_reduced(X[:, perm]) == reduced
        assert not is_column_reduced(N)
    assert False in seen
