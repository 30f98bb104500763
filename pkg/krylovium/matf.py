from dataclasses import dataclass

import numpy as np

from krylovium.gf import PrimeModulus, tally

__all__ = ('DenseMatrix', 'SingularMatrixError', 'PLUQ', 'mat_mul', 'matmul_arrays', 'row_echelon',
           'col_rank_profile', 'row_rank_profile', 'rank', 'pluq', 'solve', 'inverse',
           'IncrementalEchelon', 'STRASSEN_THRESHOLD')

# Dimension from which mat_mul switches to Strassen's recursion. None keeps the classical product.
STRASSEN_THRESHOLD = None


class SingularMatrixError(ValueError):
    """Raised when inverting or solving with a singular matrix.

    Attributes:
        rank: the rank found by elimination.
    """

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class DenseMatrix:
    """Matrix over GF(p) backed by a two dimensional numpy array of canonical residues.

    Empty shapes (rows or cols equal to 0) are legal.

    Args:
        entries: anything numpy can turn into a 2d integer array.
        modulus: PrimeModulus or prime integer.
    """

    def __init__(self, entries, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        arr = np.asarray(entries)
        if arr.ndim != 2:
            raise ValueError("DenseMatrix entries must be 2d, got shape {0}".format(arr.shape))
        self.modulus = modulus
        self.entries = modulus.reduce(arr)

    @classmethod
    def zeros(cls, rows, cols, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        return cls(modulus.zeros((rows, cols)), modulus)

    @classmethod
    def identity(cls, n, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        return cls(modulus.identity(n), modulus)

    @classmethod
    def from_rows(cls, rows, modulus, cols=None):
        """Build from a list of rows. cols is needed only when rows is empty or the rows are empty."""
        if len(rows) == 0 or cols == 0:
            return cls.zeros(len(rows), 0 if cols is None else cols, modulus)
        return cls(np.array([[int(v) for v in row] for row in rows], dtype=object), modulus)

    @classmethod
    def hstack(cls, blocks, rows=None, modulus=None):
        blocks = list(blocks)
        if not blocks:
            return cls.zeros(rows, 0, modulus)
        return cls(np.concatenate([b.entries for b in blocks], axis=1), blocks[0].modulus)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    @property
    def T(self):
        return DenseMatrix(self.entries.T.copy(), self.modulus)

    def column(self, j):
        return DenseMatrix(self.entries[:, j:j + 1], self.modulus)

    def columns(self, idx):
        return DenseMatrix(self.entries[:, list(idx)], self.modulus)

    def is_zero(self):
        return not np.any(self.entries != 0)

    def tolist(self):
        return [[int(v) for v in row] for row in self.entries]

    def copy(self):
        return DenseMatrix(self.entries.copy(), self.modulus)

    def __getitem__(self, key):
        out = self.entries[key]
        if isinstance(out, np.ndarray):
            if out.ndim == 1:
                column = isinstance(key, tuple) and isinstance(key[1], (int, np.integer))
                out = out.reshape(-1, 1) if column else out.reshape(1, -1)
            return DenseMatrix(out, self.modulus)
        return int(out)

    def _check(self, other):
        self.modulus.check(other.modulus)
        if self.shape != other.shape:
            raise ValueError("shape mismatch {0} vs {1}".format(self.shape, other.shape))

    def __add__(self, other):
        self._check(other)
        return DenseMatrix(self.entries + other.entries, self.modulus)

    def __sub__(self, other):
        self._check(other)
        return DenseMatrix(self.entries - other.entries, self.modulus)

    def __neg__(self):
        return DenseMatrix(-self.entries, self.modulus)

    def scale(self, c):
        return DenseMatrix(self.entries * (int(c) % self.modulus.p), self.modulus)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return (self.modulus == other.modulus and self.shape == other.shape
                and bool(np.all(self.entries == other.entries)))

    def __repr__(self):
        return "DenseMatrix({0}x{1} over GF({2}), {3})".format(self.rows, self.cols, self.modulus.p,
                                                              self.tolist())


def _classical(a, b, modulus):
    p = modulus.p
    r, k = a.shape
    c = b.shape[1]
    if r == 0 or c == 0 or k == 0:
        return modulus.zeros((r, c))
    if modulus.dtype is object:
        return np.dot(a, b) % p
    # split the inner dimension so the int64 accumulator never overflows
    chunk = (2**63 - 1) // max(1, (p - 1) ** 2)
    if chunk < 16:
        return modulus.reduce(np.dot(a.astype(object), b.astype(object)))
    if chunk >= k:
        return np.dot(a, b) % p
    out = modulus.zeros((r, c))
    for start in range(0, k, chunk):
        out = (out + np.dot(a[:, start:start + chunk], b[start:start + chunk]) % p) % p
    return out


def _strassen(a, b, modulus, threshold):
    r, k = a.shape
    c = b.shape[1]
    if min(r, k, c) < max(threshold, 2):
        return _classical(a, b, modulus)
    p = modulus.p
    r2, k2, c2 = (r + 1) // 2, (k + 1) // 2, (c + 1) // 2
    ap = modulus.zeros((2 * r2, 2 * k2))
    ap[:r, :k] = a
    bp = modulus.zeros((2 * k2, 2 * c2))
    bp[:k, :c] = b
    a11, a12, a21, a22 = ap[:r2, :k2], ap[:r2, k2:], ap[r2:, :k2], ap[r2:, k2:]
    b11, b12, b21, b22 = bp[:k2, :c2], bp[:k2, c2:], bp[k2:, :c2], bp[k2:, c2:]

    def rec(x, y):
        return _strassen(x % p, y % p, modulus, threshold)

    m1 = rec(a11 + a22, b11 + b22)
    m2 = rec(a21 + a22, b11)
    m3 = rec(a11, b12 - b22)
    m4 = rec(a22, b21 - b11)
    m5 = rec(a11 + a12, b22)
    m6 = rec(a21 - a11, b11 + b12)
    m7 = rec(a12 - a22, b21 + b22)
    out = modulus.zeros((2 * r2, 2 * c2))
    out[:r2, :c2] = (m1 + m4 - m5 + m7) % p
    out[:r2, c2:] = (m3 + m5) % p
    out[r2:, :c2] = (m2 + m4) % p
    out[r2:, c2:] = (m1 - m2 + m3 + m6) % p
    return out[:r, :c]


def matmul_arrays(a, b, modulus, strassen_threshold=None):
    """Product of two residue arrays, reduced mod p."""
    if a.shape[1] != b.shape[0]:
        raise ValueError("inner dimensions disagree: {0} and {1}".format(a.shape, b.shape))
    tally(a.shape[0] * a.shape[1] * b.shape[1])
    if strassen_threshold is None:
        strassen_threshold = STRASSEN_THRESHOLD
    if strassen_threshold is not None:
        return _strassen(a, b, modulus, strassen_threshold)
    return _classical(a, b, modulus)


def mat_mul(A, B, strassen_threshold=None):
    """Exact product of two dense matrices.

    Args:
        A: DenseMatrix r x k.
        B: DenseMatrix k x c.
        strassen_threshold: smallest dimension handled by Strassen's recursion; defaults to the
            module value STRASSEN_THRESHOLD (off). Results are identical either way.

    Returns:
        DenseMatrix r x c.
    """
    A.modulus.check(B.modulus)
    return DenseMatrix(matmul_arrays(A.entries, B.entries, A.modulus, strassen_threshold), A.modulus)


def row_echelon(a, modulus, reduced=False):
    """Gaussian elimination with leftmost, first-nonzero pivoting.

    Pivot rows are normalized to a leading 1. With reduced=True the pivot columns are also cleared
    above the pivots, giving the reduced row echelon form.

    Args:
        a: 2d residue array (not modified).
        modulus: PrimeModulus.
        reduced: whether to clear above the pivots.

    Returns:
        echelon: the transformed array, same shape as a.
        pivots: list of pivot column indices, i.e. the column rank profile of a.
    """
    p = modulus.p
    a = a.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r, c:] = a[r, c:] * modulus.inv(a[r, c]) % p
        col = a[:, c].copy()
        col[r] = 0
        if not reduced:
            col[:r] = 0
        idx = np.nonzero(col)[0]
        if idx.size:
            a[idx, c:] = (a[idx, c:] - np.outer(col[idx], a[r, c:])) % p
            tally(idx.size * (cols - c))
        pivots.append(c)
        r += 1
    return a, pivots


def col_rank_profile(M):
    """Lexicographically smallest set of column indices spanning the column space of M.

    Column j is selected iff it is not in the span of the columns selected before it.
    """
    return row_echelon(M.entries, M.modulus)[1]


def row_rank_profile(M):
    return row_echelon(M.entries.T, M.modulus)[1]


def rank(M):
    return len(col_rank_profile(M))


@dataclass
class PLUQ:
    """M.entries[P][:, Q] == L @ U, with L unit lower trapezoidal (rows x rank) and U upper
    trapezoidal (rank x cols) whose leading rank x rank block is nonsingular."""
    P: np.ndarray
    L: DenseMatrix
    U: DenseMatrix
    Q: np.ndarray
    rank: int


def pluq(M):
    """PLUQ decomposition by Gaussian elimination with first-nonzero pivoting.

    The pivot columns, in order, form the column rank profile of M and come first in Q.
    """
    mod = M.modulus
    p = mod.p
    a = M.entries.copy()
    rows, cols = a.shape
    perm = np.arange(rows)
    L = mod.zeros((rows, min(rows, cols)))
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            perm[[r, i]] = perm[[i, r]]
            L[[r, i], :r] = L[[i, r], :r]
        factors = a[r + 1:, c] * mod.inv(a[r, c]) % p
        L[r, r] = 1
        L[r + 1:, r] = factors
        a[r + 1:, c:] = (a[r + 1:, c:] - np.outer(factors, a[r, c:])) % p
        tally((rows - r) * (cols - c))
        pivots.append(c)
        r += 1
    chosen = set(pivots)
    rest = [c for c in range(cols) if c not in chosen]
    Q = np.array(pivots + rest, dtype=np.int64)
    U = a[:r][:, Q] if cols else a[:r]
    return PLUQ(P=perm, L=DenseMatrix(L[:, :r], mod), U=DenseMatrix(U, mod), Q=Q, rank=r)


def solve(M, rhs):
    """Solve M X = rhs for a nonsingular square M.

    Raises:
        SingularMatrixError: M is singular; the exception carries the rank found.
    """
    M.modulus.check(rhs.modulus)
    n = M.rows
    if M.cols != n:
        raise ValueError("solve needs a square matrix, got {0}".format(M.shape))
    if rhs.rows != n:
        raise ValueError("right hand side has {0} rows, expected {1}".format(rhs.rows, n))
    mod = M.modulus
    p = mod.p
    dec = pluq(M)
    if dec.rank < n:
        raise SingularMatrixError("matrix of size {0} is singular (rank {1})".format(n, dec.rank),
                                  rank=dec.rank)
    L, U = dec.L.entries, dec.U.entries
    y = rhs.entries[dec.P].copy()
    for i in range(n):
        if i + 1 < n:
            y[i + 1:] = (y[i + 1:] - np.outer(L[i + 1:, i], y[i])) % p
    for i in range(n - 1, -1, -1):
        y[i] = y[i] * mod.inv(U[i, i]) % p
        if i:
            y[:i] = (y[:i] - np.outer(U[:i, i], y[i])) % p
    tally(n * n * max(1, rhs.cols))
    return DenseMatrix(y, mod)


def inverse(M):
    return solve(M, DenseMatrix.identity(M.rows, M.modulus))


class IncrementalEchelon:
    """Echelon basis of a growing subspace of GF(p)^n, one vector at a time.

    Used by the brute-force oracles: add() reports whether a vector enlarged the span.
    """

    def __init__(self, n, modulus):
        self.n = n
        self.modulus = modulus
        self._pivots = []
        self._vectors = []

    @property
    def dim(self):
        return len(self._vectors)

    def reduce(self, v):
        p = self.modulus.p
        v = self.modulus.reduce(np.asarray(v).reshape(-1)).copy()
        for piv, w in zip(self._pivots, self._vectors):
            if v[piv] != 0:
                v = (v - v[piv] * w) % p
        return v

    def contains(self, v):
        return not np.any(self.reduce(v) != 0)

    def add(self, v):
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        self._pivots.append(piv)
        self._vectors.append(w * self.modulus.inv(w[piv]) % self.modulus.p)
        return True
