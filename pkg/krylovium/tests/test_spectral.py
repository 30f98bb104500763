import itertools

import pytest
import sympy

from krylovium.matf import DenseMatrix
from krylovium.poly import Poly
from krylovium.krylov import AlgoConfig, KrylovSpec
from krylovium.spectral import (KalmanData, charpoly, frobenius_form, invariant_factors,
                                kalman_decomposition, matrix_minpoly, matrix_power, polyval_matrix,
                                vector_minpoly)
from krylovium.utils import block_diagonal, companion_matrix, random_instance

PRIMES = [2, 3, 97, 2**62 - 57]


def D(rows, p=97):
    return DenseMatrix.from_rows(rows, p)


def P(coeffs, p=97):
    return Poly(coeffs, p)


def power_by_squaring(A, k):
    result = DenseMatrix.identity(A.rows, A.modulus)
    base = A
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def test_vector_minpoly_examples():
    assert vector_minpoly(DenseMatrix.identity(3, 97), [1, 0, 0]) == P([-1, 1])
    assert vector_minpoly(D([[1, 2], [3, 4]]), [0, 0]) == P([1])
    C = companion_matrix(P([-2, 0, 0, 1]))
    assert vector_minpoly(C, [1, 0, 0]) == P([-2, 0, 0, 1])
    # e2 of a nilpotent Jordan block needs x^2
    assert vector_minpoly(D([[0, 1], [0, 0]]), [0, 1]) == P([0, 0, 1])


@pytest.mark.parametrize("p", PRIMES)
def test_vector_minpoly_annihilates(p):
    A, U = random_instance(p, 6, 1, seed=4)
    f = vector_minpoly(A, U)
    assert f.lc == 1
    assert (polyval_matrix(f, A) @ U).is_zero()
    assert f.degree >= 0
    assert (matrix_minpoly(A) % f).is_zero()


@pytest.mark.parametrize("p", [2, 3])
def test_vector_minpoly_is_minimal(p):
    for stream in range(12):
        n = 1 + stream % 4
        A, U = random_instance(p, n, 1, seed=113, stream=stream)
        f = vector_minpoly(A, U)
        assert (polyval_matrix(f, A) @ U).is_zero()
        for degree in range(f.degree):
            for low in itertools.product(range(p), repeat=degree):
                g = Poly(list(low) + [1], p)
                assert not (polyval_matrix(g, A) @ U).is_zero()



def test_invariant_factor_examples():
    assert invariant_factors(DenseMatrix.identity(2, 97)).invariant_factors == [P([-1, 1]), P([-1, 1])]
    data = invariant_factors(D([[1, 0], [0, 2]]))
    assert data.invariant_factors == [P([2, -3, 1])]
    C = companion_matrix(P([0, 0, 1]))
    data = invariant_factors(block_diagonal([C, C], 97))
    assert data.invariant_factors == [P([0, 0, 1]), P([0, 0, 1])]
    assert data.minpoly == P([0, 0, 1])
    assert data.charpoly == P([0, 0, 0, 0, 1])


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("family", ['companion', 'diagonal', 'nilpotent', 'dense'])
def test_invariant_factors_structure(p, family):
    A, _ = random_instance(p, 6, 0, seed=2, family=family)
    data = invariant_factors(A)
    factors = data.invariant_factors
    assert all(f.lc == 1 and f.degree >= 1 for f in factors)
    assert sum(f.degree for f in factors) == 6
    for f, g in zip(factors, factors[1:]):
        assert (g % f).is_zero()
    # similarity invariant
    assert invariant_factors(data.block_form).invariant_factors == factors
    assert polyval_matrix(data.minpoly, A).is_zero()


@pytest.mark.parametrize("p", [2, 97, 2**62 - 57])
def test_charpoly_against_sympy(p):
    for stream in range(3):
        A, _ = random_instance(p, 5, 0, seed=7, stream=stream)
        x = sympy.Symbol('x')
        expected = sympy.Matrix(A.tolist()).charpoly(x).all_coeffs()[::-1]
        assert charpoly(A) == Poly([int(c) for c in expected], p)


def test_frobenius_form_is_block_companion():
    A = D([[1, 0], [0, 2]])
    assert frobenius_form(A) == companion_matrix(P([2, -3, 1]))
    assert frobenius_form(DenseMatrix.zeros(0, 0, 97)).shape == (0, 0)


def test_polyval_matrix():
    A = D([[1, 1], [0, 1]])
    assert polyval_matrix(Poly.zero(97), A) == DenseMatrix.zeros(2, 2, 97)
    assert polyval_matrix(P([5]), A) == DenseMatrix.identity(2, 97).scale(5)
    # 1 + 2x + 3x^2 at a Jordan block
    assert polyval_matrix(P([1, 2, 3]), A) == D([[6, 8], [0, 6]])
    f = P(list(range(1, 12)))
    expected = DenseMatrix.zeros(2, 2, 97)
    for k, c in enumerate(f.tolist()):
        expected = expected + power_by_squaring(A, k).scale(c)
    assert polyval_matrix(f, A) == expected


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("k", [0, 1, 2, 10**9 + 7, 2**64 + 1])
def test_matrix_power(p, k):
    A, _ = random_instance(p, 5, 0, seed=11)
    assert matrix_power(A, k) == power_by_squaring(A, k)


def test_matrix_power_examples():
    N = D([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert matrix_power(N, 5).is_zero()
    assert matrix_power(N, 2) == D([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    assert matrix_power(D([[2]]), 96) == D([[1]])
    assert matrix_power(DenseMatrix.zeros(0, 0, 97), 3).shape == (0, 0)
    with pytest.raises(ValueError):
        matrix_power(N, -1)
    with pytest.raises(ValueError):
        matrix_power(DenseMatrix.zeros(2, 3, 97), 2)


def test_matrix_power_additive():
    A, _ = random_instance(97, 6, 0, seed=5, family='companion')
    a, b = 12345, 2**40 + 3
    assert matrix_power(A, a + b) == matrix_power(A, a) @ matrix_power(A, b)


def test_kalman_example():
    spec = KrylovSpec(D([[1, 0], [0, 2]]), D([[1], [0]]))
    data = kalman_decomposition(spec)
    assert data.nu == 1
    assert data.P == DenseMatrix.identity(2, 97)
    assert data.transformed_A == spec.A
    with pytest.raises(TypeError):
        KalmanData(data.P, data.nu)


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("stream", range(4))
def test_kalman_zero_blocks(p, stream):
    A, U = random_instance(p, 7, 2, seed=8, stream=stream)
    spec = KrylovSpec(A, U)
    data = kalman_decomposition(spec, AlgoConfig(strategy='keller_gehrig'))
    nu = data.nu
    tA = data.transformed_A
    tU = data.transformed_U
    assert tA[nu:, :nu].is_zero()
    assert tU[nu:, :].is_zero()
    assert data.P[:, :nu] == kalman_decomposition(spec).P[:, :nu]
