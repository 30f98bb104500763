import numpy as np

from krylovium.gf import PrimeModulus
from krylovium.matf import DenseMatrix, matmul_arrays, rank
from krylovium.poly import NEG_INF, Poly

__all__ = ('PolyMatrix', 'DegreeTuple', 'cdeg', 'col_truncate', 'eval_at_zero', 'coeff', 'pm_mul',
           'pm_add', 'pm_sub', 'expand_columns', 'leading_matrix', 'is_column_reduced',
           'col_reverse', 'partial_linearization', 'hstack', 'vstack', 'check_degrees')


class DegreeTuple(tuple):
    """Tuple of degrees; entries are naturals or NEG_INF."""

    def __new__(cls, values=()):
        return super().__new__(cls, (v if v == NEG_INF else int(v) for v in values))

    @property
    def total(self):
        """Sum of the entries, skipping NEG_INF."""
        return sum(v for v in self if v != NEG_INF)

    def __repr__(self):
        return "DegreeTuple({0})".format(", ".join("-inf" if v == NEG_INF else str(v) for v in self))


def check_degrees(d, n, what="degree tuple"):
    d = [int(v) for v in d]
    if len(d) != n:
        raise ValueError("{0} has length {1}, expected {2}".format(what, len(d), n))
    if any(v < 0 for v in d):
        raise ValueError("{0} must be nonnegative, got {1}".format(what, d))
    return d


class PolyMatrix:
    """Matrix of univariate polynomials over GF(p).

    Coefficients are kept in a numpy cube of shape (rows, cols, length), the last axis running over
    powers of x, low to high. Trailing all-zero coefficient layers are trimmed so that length is
    deg + 1 (0 for the zero matrix).

    Args:
        coeffs: 3d integer array (rows, cols, length).
        modulus: PrimeModulus or prime integer.
    """

    def __init__(self, coeffs, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        arr = np.asarray(coeffs)
        if arr.ndim != 3:
            raise ValueError("PolyMatrix coefficients must be 3d, got shape {0}".format(arr.shape))
        arr = modulus.reduce(arr)
        if arr.shape[2]:
            nz = np.nonzero(np.any(arr != 0, axis=(0, 1)))[0]
            arr = arr[:, :, :int(nz[-1]) + 1] if nz.size else arr[:, :, :0]
        self.modulus = modulus
        self.coeffs = arr
        self._cdeg = None

    @classmethod
    def zeros(cls, rows, cols, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        return cls(modulus.zeros((rows, cols, 0)), modulus)

    @classmethod
    def identity(cls, n, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        return cls(modulus.identity(n)[:, :, None], modulus)

    @classmethod
    def from_constant(cls, M):
        return cls(M.entries[:, :, None], M.modulus)

    @classmethod
    def from_coefficients(cls, matrices):
        """Build sum_k matrices[k] * x**k from a list of DenseMatrix."""
        mod = matrices[0].modulus
        return cls(np.stack([M.entries for M in matrices], axis=2), mod)

    @classmethod
    def from_polys(cls, entries, modulus, cols=None):
        """Build from a list of rows of Poly (or integers)."""
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        rows = len(entries)
        cols = len(entries[0]) if rows else (cols or 0)
        polys = [[e if isinstance(e, Poly) else Poly([e], modulus) for e in row] for row in entries]
        length = max([len(e.coeffs) for row in polys for e in row], default=0)
        arr = modulus.zeros((rows, cols, length))
        for i, row in enumerate(polys):
            if len(row) != cols:
                raise ValueError("ragged rows in polynomial matrix")
            for j, e in enumerate(row):
                arr[i, j, :len(e.coeffs)] = e.coeffs
        return cls(arr, modulus)

    @property
    def rows(self):
        return self.coeffs.shape[0]

    @property
    def cols(self):
        return self.coeffs.shape[1]

    @property
    def shape(self):
        return self.coeffs.shape[:2]

    @property
    def length(self):
        return self.coeffs.shape[2]

    @property
    def degree(self):
        return self.length - 1 if self.length else NEG_INF

    def is_zero(self):
        return self.length == 0

    def entry(self, i, j):
        return Poly(self.coeffs[i, j], self.modulus)

    def to_polys(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def padded(self, length):
        """Coefficient cube zero padded (or cut) to the given length."""
        if length <= self.length:
            return self.coeffs[:, :, :length]
        out = self.modulus.zeros((self.rows, self.cols, length))
        out[:, :, :self.length] = self.coeffs
        return out

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(k, (int, np.integer)) for k in key):
            return self.entry(*key)
        if not isinstance(key, tuple):
            key = (key, slice(None))
        rk, ck = (k if isinstance(k, slice) else np.atleast_1d(np.asarray(k, dtype=np.int64)) for k in key)
        return PolyMatrix(self.coeffs[rk][:, ck], self.modulus)

    def __add__(self, other):
        return pm_add(self, other)

    def __sub__(self, other):
        return pm_sub(self, other)

    def __neg__(self):
        return PolyMatrix(-self.coeffs, self.modulus)

    def __matmul__(self, other):
        return pm_mul(self, other)

    def scale(self, c):
        return PolyMatrix(self.coeffs * (int(c) % self.modulus.p), self.modulus)

    def shift(self, k):
        """Multiply by x**k."""
        if k == 0 or self.is_zero():
            return self
        out = self.modulus.zeros((self.rows, self.cols, self.length + k))
        out[:, :, k:] = self.coeffs
        return PolyMatrix(out, self.modulus)

    def div_x(self, k):
        """Quotient by x**k, dropping the low coefficients."""
        return PolyMatrix(self.coeffs[:, :, k:], self.modulus)

    def rem_x(self, k):
        """Remainder modulo x**k, uniformly on all columns."""
        return PolyMatrix(self.coeffs[:, :, :k], self.modulus)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.modulus == other.modulus and self.coeffs.shape == other.coeffs.shape
                and bool(np.all(self.coeffs == other.coeffs)))

    def __repr__(self):
        return "PolyMatrix({0}x{1}, degree {2}, over GF({3}))".format(
            self.rows, self.cols, self.degree, self.modulus.p)


def hstack(blocks, rows=None, modulus=None):
    blocks = list(blocks)
    if not blocks:
        return PolyMatrix.zeros(rows, 0, modulus)
    length = max(b.length for b in blocks)
    return PolyMatrix(np.concatenate([b.padded(length) for b in blocks], axis=1), blocks[0].modulus)


def vstack(blocks):
    length = max(b.length for b in blocks)
    return PolyMatrix(np.concatenate([b.padded(length) for b in blocks], axis=0), blocks[0].modulus)


def cdeg(M):
    """Column degrees of M; NEG_INF marks zero columns."""
    if M._cdeg is None:
        if M.length == 0:
            M._cdeg = DegreeTuple([NEG_INF] * M.cols)
        else:
            nz = np.any(M.coeffs != 0, axis=0)
            out = []
            for j in range(M.cols):
                k = np.nonzero(nz[j])[0]
                out.append(int(k[-1]) if k.size else NEG_INF)
            M._cdeg = DegreeTuple(out)
    return M._cdeg


def col_truncate(M, d):
    """Column j of M reduced modulo x**d[j]."""
    d = check_degrees(d, M.cols)
    length = min(M.length, max(d, default=0))
    out = M.coeffs[:, :, :length].copy()
    for j, dj in enumerate(d):
        out[:, j, dj:] = 0
    return PolyMatrix(out, M.modulus)


def eval_at_zero(M):
    if M.length == 0:
        return DenseMatrix.zeros(M.rows, M.cols, M.modulus)
    return DenseMatrix(M.coeffs[:, :, 0], M.modulus)


def coeff(M, k):
    """Coefficient of x**k as a constant matrix."""
    if k < 0 or k >= M.length:
        return DenseMatrix.zeros(M.rows, M.cols, M.modulus)
    return DenseMatrix(M.coeffs[:, :, k], M.modulus)


def pm_mul(M, N):
    """Product of two polynomial matrices.

    Each coefficient of M multiplies the whole coefficient cube of N in one constant matrix product.
    """
    M.modulus.check(N.modulus)
    if M.cols != N.rows:
        raise ValueError("inner dimensions disagree: {0} and {1}".format(M.shape, N.shape))
    mod = M.modulus
    p = mod.p
    r, c = M.rows, N.cols
    if M.length == 0 or N.length == 0:
        return PolyMatrix.zeros(r, c, mod)
    lm, ln = M.length, N.length
    flat = N.coeffs.reshape(N.rows, c * ln)
    out = mod.zeros((r, c, lm + ln - 1))
    for a in range(lm):
        Ma = M.coeffs[:, :, a]
        if not np.any(Ma != 0):
            continue
        prod = matmul_arrays(Ma, flat, mod).reshape(r, c, ln)
        out[:, :, a:a + ln] = (out[:, :, a:a + ln] + prod) % p
    return PolyMatrix(out, mod)


def pm_add(M, N):
    M.modulus.check(N.modulus)
    if M.shape != N.shape:
        raise ValueError("shape mismatch {0} vs {1}".format(M.shape, N.shape))
    length = max(M.length, N.length)
    return PolyMatrix(M.padded(length) + N.padded(length), M.modulus)


def pm_sub(M, N):
    return pm_add(M, -N)


def expand_columns(P, d):
    """Constant matrix [Coeffs(P_1, d_1) | ... | Coeffs(P_m, d_m)].

    Coeffs(v, d) is the rows x d matrix [v_0 v_1 ... v_{d-1}] of the first d coefficients of v.
    """
    d = check_degrees(d, P.cols)
    total = sum(d)
    if total == 0:
        return DenseMatrix.zeros(P.rows, 0, P.modulus)
    cube = P.padded(max(d))
    blocks = [cube[:, j, :dj] for j, dj in enumerate(d) if dj > 0]
    return DenseMatrix(np.concatenate(blocks, axis=1), P.modulus)


def leading_matrix(M):
    """Coefficient of x**cdeg_j in column j; zero columns stay zero."""
    out = M.modulus.zeros((M.rows, M.cols))
    for j, dj in enumerate(cdeg(M)):
        if dj != NEG_INF:
            out[:, j] = M.coeffs[:, j, dj]
    return DenseMatrix(out, M.modulus)


def is_column_reduced(M):
    """Whether the leading matrix of M has full column rank.

    Raises:
        ValueError: M has a zero column.
    """
    if any(dj == NEG_INF for dj in cdeg(M)):
        raise ValueError("column reducedness is undefined with zero columns")
    return rank(leading_matrix(M)) == M.cols


def col_reverse(M, d):
    """Column j replaced by x**d_j * (column j)(1/x); needs cdeg(M)_j <= d_j."""
    d = check_degrees(d, M.cols)
    for j, (cj, dj) in enumerate(zip(cdeg(M), d)):
        if cj != NEG_INF and cj > dj:
            raise ValueError("column {0} has degree {1} > {2}".format(j, cj, dj))
    length = max(d, default=-1) + 1
    cube = M.padded(max(length, M.length))
    out = M.modulus.zeros((M.rows, M.cols, length))
    for j, dj in enumerate(d):
        out[:, j, :dj + 1] = cube[:, j, dj::-1]
    return PolyMatrix(out, M.modulus)


def partial_linearization(P):
    """Expand a square polynomial matrix into one of degree at most t.

    With t = max(1, ceil(|cdeg P| / m)), every column of degree d_j > t is cut into chunks
    c0 + x^t c1 + ... + x^(kt) ck of width t. Chunk i >= 1 gets a new column y_i and a new row
    stating y_i - x^t y_(i-1) = 0 (y_0 being the original column's unknown), so the expanded matrix
    has the same determinant and the leading m x m block of its inverse is the inverse of P.
    New rows and columns are appended after index m, column by column.

    Args:
        P: square PolyMatrix.

    Returns:
        P_bar: the expanded PolyMatrix.
        t: degree bound, 0 when P is constant.
        m_bar: dimension of P_bar.
    """
    m = P.rows
    if P.cols != m:
        raise ValueError("partial linearization needs a square matrix, got {0}".format(P.shape))
    if P.degree == NEG_INF or P.degree == 0:
        return P, 0, m
    degs = cdeg(P)
    t = max(1, -(-degs.total // m))
    mod = P.modulus
    chunks = []
    for j, dj in enumerate(degs):
        if dj != NEG_INF and dj > t:
            chunks.append((j, -(-(dj + 1) // t) - 1))
    m_bar = m + sum(k for _, k in chunks)
    out = mod.zeros((m_bar, m_bar, t + 1))
    cube = P.coeffs
    low = min(P.length, t + 1)
    out[:m, :m, :low] = cube[:, :, :low]
    nxt = m
    for j, k in chunks:
        # the first chunk stays in column j
        out[:m, j, :] = 0
        out[:m, j, :t] = cube[:, j, :t]
        prev = j
        for i in range(1, k + 1):
            col = nxt
            piece = cube[:, j, i * t:(i + 1) * t]
            out[:m, col, :piece.shape[1]] = piece
            out[col, col, 0] = 1
            out[col, prev, t] = mod.p - 1
            prev = col
            nxt += 1
    return PolyMatrix(out, mod), t, m_bar
