"""
Spectral applications of Krylov bases: minimal polynomials, invariant factors and the Frobenius
form, matrix powers and the controllability split of a pair (A, U).
"""
import math
from dataclasses import dataclass

import numpy as np

from krylovium.matf import DenseMatrix, col_rank_profile, inverse
from krylovium.poly import Poly, powmod
from krylovium.krylov import KrylovSpec, kernel_of_shifted_pencil, max_krylov_basis
from krylovium.utils import block_diagonal, companion_matrix

__all__ = ('FrobeniusData', 'KalmanData', 'vector_minpoly', 'matrix_minpoly', 'invariant_factors',
           'charpoly', 'frobenius_form', 'polyval_matrix', 'matrix_power', 'kalman_decomposition')


@dataclass
class FrobeniusData:
    """Invariant factors f_1 | f_2 | ... | f_s of A (monic, degree >= 1) and the block diagonal
    matrix of their companion matrices."""
    invariant_factors: list
    block_form: DenseMatrix

    @property
    def charpoly(self):
        out = Poly.one(self.block_form.modulus)
        for f in self.invariant_factors:
            out = out * f
        return out

    @property
    def minpoly(self):
        if not self.invariant_factors:
            return Poly.one(self.block_form.modulus)
        return self.invariant_factors[-1]


@dataclass
class KalmanData:
    """Change of basis P splitting GF(p)^n into Orb(A, U) and a complement.

    Attributes:
        P: invertible n x n matrix; its first nu columns are the maximal Krylov basis.
        nu: dimension of Orb(A, U).
        spec: the pair (A, U) that P splits, needed by transformed_A and transformed_U.
    """
    P: DenseMatrix
    nu: int
    spec: KrylovSpec

    @property
    def transformed_A(self):
        """P^-1 A P, block upper triangular with a nu x nu leading block."""
        return inverse(self.P) @ self.spec.A @ self.P

    @property
    def transformed_U(self):
        """P^-1 U, zero below row nu."""
        return inverse(self.P) @ self.spec.U


def _as_column(u, modulus):
    if isinstance(u, DenseMatrix):
        return u
    return DenseMatrix(np.asarray([int(v) for v in u], dtype=object).reshape(-1, 1), modulus)


def vector_minpoly(A, u):
    """Monic polynomial f of least degree with f(A) u = 0.

    Read off as the last entry, made monic, of a minimal kernel basis of [xI - A, -u].

    Args:
        A: square DenseMatrix.
        u: DenseMatrix column or sequence of integers.
    """
    u = _as_column(u, A.modulus)
    if u.is_zero():
        return Poly.one(A.modulus)
    kernel = kernel_of_shifted_pencil(KrylovSpec(A, u))
    return kernel.bottom[0, 0].monic()


def _smith_diagonal(A):
    """Diagonal of the Smith normal form of xI - A by elimination over GF(p)[x]."""
    n = A.rows
    mod = A.modulus
    M = [[Poly.constant(-int(A.entries[i, j]), mod) for j in range(n)] for i in range(n)]
    for i in range(n):
        M[i][i] = M[i][i] + Poly.x(mod)
    for k in range(n):
        while True:
            nz = [(M[i][j].degree, i, j) for i in range(k, n) for j in range(k, n) if not M[i][j].is_zero()]
            if not nz:
                break
            _, i, j = min(nz)
            M[k], M[i] = M[i], M[k]
            for row in M:
                row[k], row[j] = row[j], row[k]
            piv = M[k][k]
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    q = M[i][k] // piv
                    M[i] = [a - q * b for a, b in zip(M[i], M[k])]
            for j in range(k + 1, n):
                if not M[k][j].is_zero():
                    q = M[k][j] // piv
                    for row in M:
                        row[j] = row[j] - q * row[k]
            if any(not M[i][k].is_zero() for i in range(k + 1, n)) or \
                    any(not M[k][j].is_zero() for j in range(k + 1, n)):
                continue
            bad = [i for i in range(k + 1, n) if any(not (M[i][j] % piv).is_zero() for j in range(k + 1, n))]
            if not bad:
                break
            # pull a row that piv does not divide into row k, then eliminate again
            M[k] = [a + b for a, b in zip(M[k], M[bad[0]])]
    return [M[k][k].monic() for k in range(n)]


def invariant_factors(A):
    """Invariant factors of A from the Smith normal form of xI - A.

    Returns:
        FrobeniusData with the nontrivial factors in divisibility order.
    """
    if A.rows != A.cols:
        raise ValueError("expected a square matrix, got {0}".format(A.shape))
    factors = [f for f in _smith_diagonal(A) if f.degree >= 1]
    blocks = [companion_matrix(f) for f in factors]
    return FrobeniusData(factors, block_diagonal(blocks, A.modulus))


def charpoly(A):
    """det(xI - A), as the product of the invariant factors."""
    return invariant_factors(A).charpoly


def frobenius_form(A):
    return invariant_factors(A).block_form


def matrix_minpoly(A):
    return invariant_factors(A).minpoly


def polyval_matrix(f, A):
    """f(A) by Paterson-Stockmeyer: about 2 sqrt(deg f) matrix products.

    f is cut in chunks of s = ceil(sqrt(deg f + 1)) coefficients and evaluated by Horner's rule in
    A^s, each chunk being a combination of the stored powers I, A, ..., A^(s-1).
    """
    A.modulus.check(f.modulus)
    n = A.rows
    if f.is_zero():
        return DenseMatrix.zeros(n, n, A.modulus)
    s = math.isqrt(f.degree) + 1
    powers = [DenseMatrix.identity(n, A.modulus)]
    for _ in range(s):
        powers.append(powers[-1] @ A)
    step = powers[s]
    coeffs = f.tolist()
    result = DenseMatrix.zeros(n, n, A.modulus)
    for start in range(s * ((len(coeffs) - 1) // s), -1, -s):
        chunk = DenseMatrix.zeros(n, n, A.modulus)
        for i, c in enumerate(coeffs[start:start + s]):
            if c:
                chunk = chunk + powers[i].scale(c)
        result = result @ step + chunk
    return result


def matrix_power(A, k):
    """A^k as r(A) with r = x^k rem minpoly(A).

    Args:
        A: square DenseMatrix.
        k: natural number, arbitrarily large.
    """
    k = int(k)
    if k < 0:
        raise ValueError("exponent must be a natural number, got {0}".format(k))
    if A.rows != A.cols:
        raise ValueError("expected a square matrix, got {0}".format(A.shape))
    if k == 0 or A.rows == 0:
        return DenseMatrix.identity(A.rows, A.modulus)
    return polyval_matrix(powmod(k, matrix_minpoly(A)), A)


def kalman_decomposition(spec, config=None):
    """Maximal Krylov basis of Orb(A, U) completed to a basis of GF(p)^n by unit vectors, taken in
    index order.

    Args:
        spec: KrylovSpec.
        config: AlgoConfig passed to max_krylov_basis.

    Returns:
        KalmanData.
    """
    basis = max_krylov_basis(spec, config).basis
    n = spec.n
    Z = DenseMatrix.hstack([basis, DenseMatrix.identity(n, spec.modulus)])
    P = Z.columns(col_rank_profile(Z))
    return KalmanData(P, basis.cols, spec)
