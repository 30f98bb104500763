import math
from dataclasses import dataclass
from typing import Optional
from warnings import warn

import numpy as np

from krylovium.matf import DenseMatrix, IncrementalEchelon, matmul_arrays, row_echelon
from krylovium.orderbasis import KernelBasisResult, hermite_diagonal, minimal_kernel_basis
from krylovium.poly import NEG_INF
from krylovium.polmat import (DegreeTuple, PolyMatrix, cdeg, check_degrees, col_reverse,
                              expand_columns, vstack)
from krylovium.lifting import truncated_inverse, truncated_product
from krylovium.utils import ceil_log2

__all__ = ('KrylovSpec', 'KrylovBasisResult', 'AlgoConfig', 'STRATEGIES', 'naive_krylov_matrix',
           'naive_max_indices', 'kernel_of_shifted_pencil', 'max_indices', 'krylov_matrix',
           'keller_gehrig_basis', 'max_krylov_basis', 'krylov_matrix_hybrid',
           'reverse_kernel_transform')

STRATEGIES = ('hybrid', 'keller_gehrig', 'polmat_only', 'naive')


@dataclass(frozen=True)
class KrylovSpec:
    """A square matrix A (n x n) and vectors U (n x m, m may be 0)."""
    A: DenseMatrix
    U: DenseMatrix

    def __post_init__(self):
        if self.A.rows != self.A.cols:
            raise ValueError("A must be square, got {0}".format(self.A.shape))
        if self.U.rows != self.A.rows:
            raise ValueError("U has {0} rows, A has {1}".format(self.U.rows, self.A.rows))
        self.A.modulus.check(self.U.modulus)

    @property
    def n(self):
        return self.A.rows

    @property
    def m(self):
        return self.U.cols

    @property
    def modulus(self):
        return self.A.modulus

    def restricted(self, cols):
        """Same A, with only the given columns of U."""
        return KrylovSpec(self.A, self.U.columns(cols))

    def pencil(self, reversed=False):
        """[xI - A, -U], or [I - xA, -U] when reversed."""
        mod = self.modulus
        n, m = self.n, self.m
        low = mod.zeros((n, n + m))
        high = mod.zeros((n, n + m))
        low[:, n:] = -self.U.entries
        if reversed:
            low[:, :n] = mod.identity(n)
            high[:, :n] = -self.A.entries
        else:
            low[:, :n] = -self.A.entries
            high[:, :n] = mod.identity(n)
        return PolyMatrix(np.stack([low, high], axis=2), mod)


@dataclass(frozen=True)
class KrylovBasisResult:
    """Maximal Krylov basis of Orb(A, U).

    Attributes:
        basis: DenseMatrix n x nu, the blocks [u_j, A u_j, ..., A^(d_j - 1) u_j] for j ascending.
        indices: the maximal indices d.
        column_labels: (j, k) for each column, meaning the column is A^k u_j.
    """
    basis: DenseMatrix
    indices: DegreeTuple
    column_labels: tuple

    @property
    def nu(self):
        return self.basis.cols


@dataclass
class AlgoConfig:
    """Algorithm selection for the maximal basis and Krylov matrix drivers.

    Attributes:
        omega: matrix multiplication exponent used in the threshold, in (2, 3].
        c1: positive constant of the threshold exponent.
        strategy: one of 'hybrid', 'keller_gehrig', 'polmat_only', 'naive'.
        c: explicit threshold exponent; when None it is max(4/(omega-2), c1/(omega-1)).
        reuse_kernel: compute a single kernel basis on the polynomial path (the kernel of
            [xI - A, -U] is reversed for the Krylov matrix instead of recomputing one).
    """
    omega: float = 3.0
    c1: float = 2.0
    strategy: str = 'hybrid'
    c: Optional[float] = None
    reuse_kernel: bool = False

    def __post_init__(self):
        if not 2 < self.omega <= 3:
            raise ValueError("omega must lie in (2, 3], got {0}".format(self.omega))
        if self.c1 <= 0:
            raise ValueError("c1 must be positive, got {0}".format(self.c1))
        if self.c is not None and self.c <= 0:
            raise ValueError("c must be positive, got {0}".format(self.c))
        if self.strategy not in STRATEGIES:
            raise ValueError("unknown strategy {0!r}, expected one of {1}".format(self.strategy, STRATEGIES))

    @property
    def exponent(self):
        if self.c is not None:
            return self.c
        return max(4 / (self.omega - 2), self.c1 / (self.omega - 1))

    def threshold(self, n):
        """ceil(log2(n) ** c), at least 1 and capped at 2n.

        From 2n on, the hybrid never takes the shortcut and its ceil(log2 thres) rounds already
        cover every doubling a chain can use, so larger values behave like 2n.
        """
        if n < 2:
            return 1
        lg = math.log2(n)
        # lg ** exponent overflows a float when omega is close to 2
        if lg > 1 and self.exponent * math.log2(lg) > math.log2(n) + 1:
            return 2 * n
        return max(1, min(2 * n, math.ceil(lg ** self.exponent)))


def _labels(indices):
    return tuple((j, k) for j, dj in enumerate(indices) for k in range(dj))


def _result(spec, indices, blocks):
    basis = DenseMatrix.hstack([DenseMatrix(b, spec.modulus) for b in blocks], rows=spec.n,
                               modulus=spec.modulus)
    indices = DegreeTuple(indices)
    return KrylovBasisResult(basis, indices, _labels(indices))


def naive_krylov_matrix(spec, d):
    """[K(A, u_1, d_1) | ... | K(A, u_m, d_m)] by repeated matrix-vector products."""
    d = check_degrees(d, spec.m)
    mod = spec.modulus
    blocks = [[] for _ in d]
    W = spec.U.entries
    for step in range(max(d, default=0)):
        for j, dj in enumerate(d):
            if step < dj:
                blocks[j].append(W[:, j:j + 1])
        W = matmul_arrays(spec.A.entries, W, mod)
    cols = [b for block in blocks for b in block]
    if not cols:
        return DenseMatrix.zeros(spec.n, 0, mod)
    return DenseMatrix(np.concatenate(cols, axis=1), mod)


def naive_max_indices(spec):
    """Maximal indices by incremental elimination.

    d_j is the number of iterates A^k u_j that enlarge the span of everything found before them.
    """
    mod = spec.modulus
    span = IncrementalEchelon(spec.n, mod)
    out = []
    for j in range(spec.m):
        v = spec.U.entries[:, j:j + 1]
        dj = 0
        while span.add(v):
            dj += 1
            v = matmul_arrays(spec.A.entries, v, mod)
        out.append(dj)
    return DegreeTuple(out)


def kernel_of_shifted_pencil(spec):
    """Minimal kernel basis [S; T] of [xI - A, -U]."""
    return minimal_kernel_basis(spec.pencil())


def max_indices(spec, kernel=None):
    """Maximal Krylov indices from the Hermite diagonal of the bottom block T of a minimal kernel
    basis of [xI - A, -U].

    Args:
        spec: KrylovSpec.
        kernel: optional precomputed kernel_of_shifted_pencil(spec).
    """
    if spec.m == 0:
        return DegreeTuple(())
    if kernel is None:
        kernel = kernel_of_shifted_pencil(spec)
    return DegreeTuple(h.degree for h in hermite_diagonal(kernel.bottom))


def krylov_matrix(spec, d, kernel=None):
    """Krylov matrix K(A, U, d) through the series S T^-1 = (I - xA)^-1 U.

    With [S; T] a minimal kernel basis of [I - xA, -U], T(0) is invertible, Q = T^-1 truncated at
    d and P = (S Q) truncated at d hold the wanted iterates as coefficients.

    Args:
        spec: KrylovSpec.
        d: orders, one per column of U. Columns with d_j = 0 are left out.
        kernel: optional kernel basis of [I - xA, -U] for all columns of U, with T(0) invertible,
            e.g. from reverse_kernel_transform.

    Returns:
        DenseMatrix n x |d|.
    """
    d = check_degrees(d, spec.m)
    if sum(d) == 0:
        return DenseMatrix.zeros(spec.n, 0, spec.modulus)
    if kernel is None:
        cols = [j for j, dj in enumerate(d) if dj > 0]
        d = [d[j] for j in cols]
        kernel = minimal_kernel_basis(spec.restricted(cols).pencil(reversed=True))
    Q = truncated_inverse(kernel.bottom, d)
    P = truncated_product(kernel.top, Q, d)
    return expand_columns(P, d)


def reverse_kernel_transform(S, T, n):
    """Turn a minimal kernel basis [S; T] of [xI - A, -U] into a kernel basis of [I - xA, -U].

    With d = cdeg(T), the result is S_hat = x^(d-1) S(1/x) and T_hat = x^d T(1/x), column-wise
    (zero columns of S for d_j = 0). T_hat(0) is the leading matrix of T, hence invertible.

    Raises:
        ValueError: shapes disagree, T has a zero column, or a column of S is not of degree
            below the matching column of T.
    """
    if S.rows != n:
        raise ValueError("S has {0} rows, expected {1}".format(S.rows, n))
    if T.rows != T.cols or S.cols != T.cols:
        raise ValueError("incompatible kernel blocks {0} and {1}".format(S.shape, T.shape))
    d = cdeg(T)
    if any(dj == NEG_INF for dj in d):
        raise ValueError("T has a zero column")
    for j, (sj, dj) in enumerate(zip(cdeg(S), d)):
        if sj != NEG_INF and sj >= dj:
            raise ValueError("column {0} of S has degree {1}, expected < {2}".format(j, sj, dj))
    S_hat = col_reverse(S, [max(dj - 1, 0) for dj in d])
    T_hat = col_reverse(T, d)
    return S_hat, T_hat


def _branching_rounds(spec, rounds, limits=None, monitor=None):
    """Keller-Gehrig doubling of the Krylov chains.

    Round i multiplies the chains of length exactly 2^i by B = A^(2^i). Without limits the new
    lengths are the longest prefixes of each chain lying in the column rank profile of all chains
    side by side; with limits the chains are cut at the requested orders.

    Returns:
        delta: chain lengths.
        blocks: list of n x delta_j arrays.
    """
    mod = spec.modulus
    n, m = spec.n, spec.m
    if limits is None:
        delta = [1] * m
    else:
        delta = [min(1, lj) for lj in limits]
    blocks = [spec.U.entries[:, j:j + 1] if delta[j] else mod.zeros((n, 0)) for j in range(m)]
    B = spec.A.entries
    for i in range(rounds):
        w = 2 ** i
        J = [j for j in range(m) if delta[j] == w and (limits is None or w < limits[j])]
        if not J:
            break
        W = matmul_arrays(B, np.concatenate([blocks[j] for j in J], axis=1), mod)
        ext = {j: W[:, k * w:(k + 1) * w] for k, j in enumerate(J)}
        if limits is None:
            chains = [np.concatenate([blocks[j], ext[j]], axis=1) if j in ext else blocks[j]
                      for j in range(m)]
            Z = np.concatenate(chains, axis=1)
            profile = set(row_echelon(Z, mod)[1])
            offset = 0
            for j, chain in enumerate(chains):
                prefix = 0
                while prefix < chain.shape[1] and offset + prefix in profile:
                    prefix += 1
                delta[j] = prefix
                blocks[j] = chain[:, :prefix]
                offset += chain.shape[1]
        else:
            for j in J:
                delta[j] = min(2 * w, limits[j])
                blocks[j] = np.concatenate([blocks[j], ext[j]], axis=1)[:, :delta[j]]
        if monitor is not None:
            monitor(i + 1, list(delta), _result(spec, delta, blocks).basis)
        if i + 1 < rounds:
            B = matmul_arrays(B, B, mod)
    return delta, blocks


def keller_gehrig_basis(spec):
    """Maximal Krylov basis by ceil(log2 n) + 1 rounds of Keller-Gehrig doubling."""
    if spec.n == 0 or spec.m == 0:
        return _result(spec, [0] * spec.m, [spec.modulus.zeros((spec.n, 0))] * spec.m)
    delta, blocks = _branching_rounds(spec, ceil_log2(spec.n) + 1)
    return _result(spec, delta, blocks)


def _split_columns(K, d):
    out = []
    at = 0
    for dj in d:
        out.append(K.entries[:, at:at + dj])
        at += dj
    return out


def _polynomial_path(spec, config):
    if config.reuse_kernel:
        kernel = kernel_of_shifted_pencil(spec)
        d = max_indices(spec, kernel)
        S_hat, T_hat = reverse_kernel_transform(kernel.top, kernel.bottom, spec.n)
        reversed_kernel = KernelBasisResult(vstack([S_hat, T_hat]), spec.n)
        return d, krylov_matrix(spec, d, kernel=reversed_kernel)
    d = max_indices(spec)
    return d, krylov_matrix(spec, d)


def max_krylov_basis(spec, config=None, monitor=None):
    """Maximal Krylov basis of Orb(A, U) with its indices and column labels.

    With the 'hybrid' strategy and thres = ceil(log2(n) ** c): when m <= n / thres the indices
    come from the kernel/Hermite route and the basis from krylov_matrix. Otherwise
    ceil(log2 thres) doubling rounds run first; chains still growing after them (length 2^l)
    go through the polynomial route, and the final basis is the column rank profile of all chains.

    Args:
        spec: KrylovSpec.
        config: AlgoConfig; defaults to AlgoConfig().
        monitor: optional callable monitor(i, delta, V) called after each doubling round with
            the chain lengths and the current chains V = K(A, U, delta).

    Returns:
        KrylovBasisResult.
    """
    config = AlgoConfig() if config is None else config
    n, m = spec.n, spec.m
    if n == 0 or m == 0:
        return _result(spec, [0] * m, [spec.modulus.zeros((n, 0))] * m)
    if m > n:
        warn("{0} vectors in dimension {1}: at least {2} of them get index 0".format(m, n, m - n))
    if config.strategy == 'naive':
        d = naive_max_indices(spec)
        return _result(spec, d, _split_columns(naive_krylov_matrix(spec, d), d))
    if config.strategy == 'keller_gehrig':
        return keller_gehrig_basis(spec)
    thres = config.threshold(n)
    if config.strategy == 'polmat_only' or n < 2 or m <= n / thres:
        d, K = _polynomial_path(spec, config)
        return _result(spec, d, _split_columns(K, d))
    ell = ceil_log2(thres)
    delta, blocks = _branching_rounds(spec, ell, monitor=monitor)
    J = [j for j in range(m) if delta[j] == 2 ** ell]
    if J:
        d_J, K_J = _polynomial_path(spec.restricted(J), config)
        for j, block in zip(J, _split_columns(K_J, d_J)):
            blocks[j] = block
    K = np.concatenate(blocks, axis=1)
    profile = set(row_echelon(K, spec.modulus)[1])
    indices = []
    keep = []
    offset = 0
    for block in blocks:
        selected = [k for k in range(block.shape[1]) if offset + k in profile]
        assert selected == list(range(len(selected))), "selected iterates must form a prefix"
        indices.append(len(selected))
        keep.append(block[:, :len(selected)])
        offset += block.shape[1]
    return _result(spec, indices, keep)


def krylov_matrix_hybrid(spec, d, config=None):
    """K(A, U, d) by doubling rounds capped at the requested orders, then the polynomial route for
    the chains that are still incomplete.

    Args:
        spec: KrylovSpec.
        d: orders, one per column of U.
        config: AlgoConfig; the strategy picks naive iteration, plain doubling
            ('keller_gehrig'), the polynomial route alone ('polmat_only') or the hybrid.
    """
    config = AlgoConfig() if config is None else config
    d = check_degrees(d, spec.m)
    n = spec.n
    if sum(d) == 0:
        return DenseMatrix.zeros(n, 0, spec.modulus)
    if config.strategy == 'naive':
        return naive_krylov_matrix(spec, d)
    if config.strategy == 'polmat_only':
        return krylov_matrix(spec, d)
    if config.strategy == 'keller_gehrig':
        rounds = ceil_log2(max(d)) + 1
    else:
        thres = config.threshold(n)
        if n < 2 or spec.m <= n / thres:
            return krylov_matrix(spec, d)
        rounds = ceil_log2(thres)
    delta, blocks = _branching_rounds(spec, rounds, limits=d)
    J = [j for j in range(spec.m) if delta[j] < d[j]]
    if J:
        K_J = krylov_matrix(spec.restricted(J), [d[j] for j in J])
        for j, block in zip(J, _split_columns(K_J, [d[j] for j in J])):
            blocks[j] = block
    return DenseMatrix(np.concatenate(blocks, axis=1), spec.modulus)
