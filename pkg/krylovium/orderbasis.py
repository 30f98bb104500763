from dataclasses import dataclass

import numpy as np

from krylovium.matf import SingularMatrixError, matmul_arrays, row_echelon
from krylovium.poly import NEG_INF, Poly
from krylovium.polmat import PolyMatrix, cdeg, pm_mul

__all__ = ('KernelBasisResult', 'approximant_basis', 'minimal_kernel_basis', 'hermite_diagonal',
           'determinant', 'PMBASIS_THRESHOLD')

# Orders up to this value are handled by the order-by-order iteration inside the
# divide-and-conquer variant.
PMBASIS_THRESHOLD = 16


@dataclass
class KernelBasisResult:
    """Minimal kernel basis B of a polynomial matrix F with n rows, split as B = [S; T].

    Attributes:
        basis: PolyMatrix, column reduced, F @ basis == 0.
        n: number of rows of F, which is the number of rows of the top block.
    """
    basis: PolyMatrix
    n: int

    @property
    def top(self):
        return self.basis[:self.n, :]

    @property
    def bottom(self):
        return self.basis[self.n:, :]


def _residual_coeff(F, Q, k):
    """Coefficient of x**k in F @ Q, from the coefficient cubes."""
    mod = F.modulus
    fc, qc = F.coeffs, Q
    out = mod.zeros((F.rows, qc.shape[1]))
    for a in range(max(0, k - qc.shape[2] + 1), min(F.length, k + 1)):
        Fa = fc[:, :, a]
        if np.any(Fa != 0):
            out = (out + matmul_arrays(Fa, qc[:, :, k - a], mod)) % mod.p
    return out


def _iterative_basis(F, order, shift):
    """Order-by-order approximant basis.

    At each order the constant residual coefficient is eliminated with columns taken by increasing
    shifted degree (ties by index): columns that become dependent are cancelled with the earlier
    pivot columns, and the pivot columns are multiplied by x.
    """
    mod = F.modulus
    p = mod.p
    c = F.cols
    Q = mod.zeros((c, c, order + 1))
    Q[np.arange(c), np.arange(c), 0] = 1
    sdeg = list(shift)
    for k in range(order):
        E = _residual_coeff(F, Q, k)
        if not np.any(E != 0):
            continue
        perm = sorted(range(c), key=lambda j: (sdeg[j], j))
        ech, piv = row_echelon(E[:, perm], mod, reduced=True)
        pivset = set(piv)
        pivcols = [perm[i] for i in piv]
        nonpos = [i for i in range(c) if i not in pivset]
        nonpiv = [perm[i] for i in nonpos]
        lam = ech[:len(piv)][:, nonpos]
        if nonpiv and np.any(lam != 0):
            length = Q.shape[2]
            flat = Q[:, pivcols, :].transpose(0, 2, 1).reshape(c * length, len(piv))
            upd = matmul_arrays(flat, lam, mod).reshape(c, length, len(nonpiv)).transpose(0, 2, 1)
            Q[:, nonpiv, :] = (Q[:, nonpiv, :] - upd) % p
        Q[:, pivcols, 1:] = Q[:, pivcols, :-1]
        Q[:, pivcols, 0] = 0
        for j in pivcols:
            sdeg[j] += 1
    return PolyMatrix(Q, mod), sdeg


def _divide_basis(F, order, shift, threshold):
    if order <= threshold:
        return _iterative_basis(F, order, shift)
    h = order // 2
    Q1, s1 = _divide_basis(F.rem_x(h), h, shift, threshold)
    G = pm_mul(F.rem_x(order), Q1).div_x(h).rem_x(order - h)
    Q2, s2 = _divide_basis(G, order - h, s1, threshold)
    return pm_mul(Q1, Q2), s2


def approximant_basis(F, order, shift=None, method="iterative", threshold=None):
    """Minimal approximant basis of F at the given order.

    The columns of the result form a basis of the module {q : F q = 0 mod x**order}. The basis is
    column reduced (shift-reduced when a shift is given), nonsingular, with determinant
    c * x**s where s is the total order consumed, and its columns are sorted by nondecreasing
    column degree (stable in the column index).

    Args:
        F: PolyMatrix r x c.
        order: positive integer.
        shift: optional degree shift on the c unknowns; zero by default.
        method: "iterative" (order by order) or "divide" (divide and conquer on the order).
        threshold: order below which "divide" falls back to the iteration; PMBASIS_THRESHOLD by
            default.

    Returns:
        PolyMatrix c x c.
    """
    if order < 1:
        raise ValueError("approximation order must be >= 1, got {0}".format(order))
    shift = [0] * F.cols if shift is None else [int(s) for s in shift]
    if len(shift) != F.cols:
        raise ValueError("shift has length {0}, expected {1}".format(len(shift), F.cols))
    if method == "iterative":
        Q, _ = _iterative_basis(F, order, shift)
    elif method == "divide":
        Q, _ = _divide_basis(F, order, shift, PMBASIS_THRESHOLD if threshold is None else threshold)
    else:
        raise ValueError("unknown approximant basis method {0!r}".format(method))
    degs = cdeg(Q)
    order_cols = sorted(range(Q.cols), key=lambda j: (degs[j], j))
    return Q[:, order_cols]


def minimal_kernel_basis(F, method="iterative"):
    """Minimal kernel basis of a full row rank matrix F = [F_left, F_right] of degree <= 1.

    The kernel basis is read from an approximant basis at order 2n+2: a kernel basis has column
    degrees summing to at most n, so every column with zero residual F q is an exact kernel vector
    and exactly m = cols - n of them appear.

    Args:
        F: PolyMatrix n x (n + m), degree at most 1, rank n.

    Returns:
        KernelBasisResult with an (n + m) x m basis.

    Raises:
        ValueError: F has degree > 1 or is not of full row rank.
    """
    n, c = F.shape
    m = c - n
    if F.degree != NEG_INF and F.degree > 1:
        raise ValueError("kernel basis input must have degree <= 1, got {0}".format(F.degree))
    if m < 0:
        raise ValueError("a {0}x{1} matrix cannot have full row rank".format(n, c))
    if c == 0:
        return KernelBasisResult(PolyMatrix.zeros(0, 0, F.modulus), n)
    Q = approximant_basis(F, 2 * n + 2, method=method)
    residual = cdeg(pm_mul(F, Q))
    kernel_cols = [j for j in range(c) if residual[j] == NEG_INF]
    if len(kernel_cols) != m:
        raise ValueError("input is rank deficient: found {0} kernel columns, expected {1}".format(
            len(kernel_cols), m))
    return KernelBasisResult(Q[:, kernel_cols], n)


def _upper_triangularize(T):
    """Unimodular column operations bringing a square T to upper triangular form.

    Rows are processed from the bottom; in row i the Euclidean algorithm runs on the entries of
    columns 0..i until only column i is nonzero.

    Returns:
        entries: list of rows of Poly, upper triangular.
        sign: +1 or -1, the determinant of the column transformation.
    """
    m = T.rows
    if T.cols != m:
        raise ValueError("expected a square matrix, got {0}".format(T.shape))
    E = T.to_polys()
    sign = 1
    for i in range(m - 1, -1, -1):
        while True:
            nz = [c for c in range(i + 1) if not E[i][c].is_zero()]
            if not nz:
                raise SingularMatrixError("polynomial matrix is singular")
            piv = min(nz, key=lambda c: (E[i][c].degree, c))
            if piv != i:
                for r in range(i + 1):
                    E[r][piv], E[r][i] = E[r][i], E[r][piv]
                sign = -sign
            rest = [c for c in range(i) if not E[i][c].is_zero()]
            if not rest:
                break
            for c in rest:
                q = E[i][c] // E[i][i]
                for r in range(i + 1):
                    if not E[r][i].is_zero():
                        E[r][c] = E[r][c] - q * E[r][i]
    return E, sign


def hermite_diagonal(T):
    """Diagonal entries of the Hermite normal form H = T V (upper triangular, V unimodular).

    Only the diagonal is computed; entries are monic and their degrees add up to deg det T.

    Raises:
        SingularMatrixError: T is singular.
    """
    E, _ = _upper_triangularize(T)
    return [E[i][i].monic() for i in range(T.rows)]


def determinant(T):
    """Determinant of a square polynomial matrix."""
    if T.rows == 0:
        return Poly.one(T.modulus)
    try:
        E, sign = _upper_triangularize(T)
    except SingularMatrixError:
        return Poly.zero(T.modulus)
    det = Poly.constant(sign, T.modulus)
    for i in range(T.rows):
        det = det * E[i][i]
    return det
