"""
Truncated power series solutions with polynomial matrices.

Everything here works with expansions of P^-1 for a square polynomial matrix P whose constant
coefficient P(0) is invertible.
"""
from dataclasses import dataclass, field

import numpy as np

from krylovium.matf import inverse
from krylovium.poly import NEG_INF
from krylovium.polmat import (PolyMatrix, check_degrees, cdeg, col_truncate, eval_at_zero, hstack,
                              partial_linearization, pm_mul)
from krylovium.utils import ceil_div, ceil_log2

__all__ = ('HighOrderComponents', 'newton_series_inverse', 'high_order_comp', 'series_sol',
           'truncated_inverse', 'truncated_product')


@dataclass
class HighOrderComponents:
    """Windows of the expansion of P^-1.

    Attributes:
        base_degree: t = deg P.
        slices: slice i is (P^-1 div x^((2^(i+1) - 2) t)) rem x^(2t).
        residues: residue i satisfies P^-1 div x^((2^(i+1) - 2) t) = P^-1 residues[i]; each has
            degree < t.
    """
    base_degree: int
    slices: list = field(default_factory=list)
    residues: list = field(default_factory=list)

    @property
    def levels(self):
        return len(self.slices)


def _check_square(P):
    if P.rows != P.cols:
        raise ValueError("expected a square polynomial matrix, got {0}".format(P.shape))


def newton_series_inverse(P, order):
    """P^-1 rem x^order by Newton iteration X <- X + X (I - P X), doubling the precision.

    Raises:
        SingularMatrixError: P(0) is singular.
    """
    _check_square(P)
    m = P.rows
    mod = P.modulus
    if order <= 0:
        return PolyMatrix.zeros(m, m, mod)
    X = PolyMatrix.from_constant(inverse(eval_at_zero(P)))
    ident = PolyMatrix.identity(m, mod)
    k = 1
    while k < order:
        k = min(2 * k, order)
        residual = (ident - pm_mul(P.rem_x(k), X)).rem_x(k)
        X = (X + pm_mul(X, residual)).rem_x(k)
    return X.rem_x(order)


def high_order_comp(P, h):
    """Slices 0..h of the expansion of P^-1 in windows of width 2t, t = deg P.

    Slice 0 comes from Newton iteration. Afterwards, with o_i = (2^(i+1) - 2) t, the residue
    E_(i+1) at offset o_(i+1) = o_i + (o_i + 2t) is obtained from slice i and E_i alone:
    V = ((slice_i E_i) div x^t) rem x^t is the window [o_i + t, o_i + 2t) of P^-1 E_i, and
    E_(i+1) = -(P V) div x^t. Slice i+1 is then (slice_0 E_(i+1)) rem x^(2t).

    Args:
        P: square PolyMatrix of degree t >= 1 with P(0) invertible.
        h: index of the last slice.

    Returns:
        HighOrderComponents with h + 1 slices.
    """
    _check_square(P)
    t = P.degree
    if t == NEG_INF or t < 1:
        raise ValueError("high order components need deg P >= 1")
    slice0 = newton_series_inverse(P, 2 * t)
    residue = PolyMatrix.identity(P.rows, P.modulus)
    comps = HighOrderComponents(t, [slice0], [residue])
    for i in range(h):
        V = pm_mul(comps.slices[i], residue).div_x(t).rem_x(t)
        residue = (-pm_mul(P, V)).div_x(t)
        comps.residues.append(residue)
        comps.slices.append(pm_mul(slice0, residue).rem_x(2 * t))
    return comps


def series_sol(P, V, s, comps=None):
    """Expansion (P^-1 V) rem x^(s t), t = deg P.

    s is rounded up to a power of two N. Residues R_a, defined by P^-1 V div x^a = P^-1 R_a, are
    computed at every offset a multiple of 2t below N t, in rounds halving the jump b from N t / 2
    down to 2t: R_(a+b) = -(P W) div x^t with W = ((slice_i R_a) div x^t) rem x^t, where slice i
    covers [b - 2t, b). Each window [a, a + 2t) of the solution is then (slice_0 R_a) rem x^(2t).
    For s <= 4 the expansion is computed directly by Newton iteration.

    Args:
        P: square PolyMatrix m x m of degree t >= 1, P(0) invertible.
        V: PolyMatrix m x c with deg V < t.
        s: positive integer.
        comps: optional precomputed HighOrderComponents of P with at least log2(N) - 1 slices.

    Returns:
        PolyMatrix m x c.
    """
    _check_square(P)
    t = P.degree
    if t == NEG_INF or t < 1:
        raise ValueError("series_sol needs deg P >= 1")
    if V.rows != P.rows:
        raise ValueError("right hand side has {0} rows, expected {1}".format(V.rows, P.rows))
    if V.degree != NEG_INF and V.degree >= t:
        raise ValueError("right hand side must have degree < {0}, got {1}".format(t, V.degree))
    if s < 1:
        raise ValueError("s must be a positive integer")
    m, c = V.shape
    if V.is_zero() or c == 0:
        return PolyMatrix.zeros(m, c, P.modulus)
    if s <= 4:
        return pm_mul(newton_series_inverse(P, s * t), V).rem_x(s * t)
    N = 1 << (s - 1).bit_length()
    levels = N.bit_length() - 2
    if comps is None:
        comps = high_order_comp(P, levels - 1)
    elif comps.base_degree != t or comps.levels < levels:
        raise ValueError("high order components cover {0} levels of degree {1}, need {2} of degree {3}".format(
            comps.levels, comps.base_degree, levels, t))
    residues = {0: V}
    b = N * t // 2
    i = levels - 1
    while b >= 2 * t:
        offsets = sorted(residues)
        batch = hstack([residues[a] for a in offsets])
        W = pm_mul(comps.slices[i], batch).div_x(t).rem_x(t)
        jumped = (-pm_mul(P, W)).div_x(t)
        for idx, a in enumerate(offsets):
            residues[a + b] = jumped[:, idx * c:(idx + 1) * c]
        b //= 2
        i -= 1
    offsets = sorted(residues)
    windows = pm_mul(comps.slices[0], hstack([residues[a] for a in offsets])).rem_x(2 * t)
    cube = windows.padded(2 * t)
    out = P.modulus.zeros((m, c, N * t))
    for idx, a in enumerate(offsets):
        out[:, :, a:a + 2 * t] = cube[:, idx * c:(idx + 1) * c, :]
    return PolyMatrix(out, P.modulus).rem_x(s * t)


def truncated_inverse(P, d):
    """P^-1 with column j truncated at order d_j.

    Columns are bucketed by truncation order: with delta = |d| / m and l = max(1, ceil(log2 m)),
    bucket 1 holds d_j <= 2 delta and bucket k holds 2^(k-1) delta < d_j <= 2^k delta. After a
    partial linearization to degree t, each bucket is one series_sol call on identity columns to
    order s_k t, s_k = ceil(2^k delta / t), sharing one set of high order components.

    Args:
        P: square PolyMatrix with P(0) invertible.
        d: truncation orders, one per column.

    Returns:
        PolyMatrix m x m.

    Raises:
        SingularMatrixError: P(0) is singular.
    """
    _check_square(P)
    m = P.rows
    mod = P.modulus
    d = check_degrees(d, m)
    total = sum(d)
    if total == 0:
        return PolyMatrix.zeros(m, m, mod)
    if P.degree <= 0:
        return col_truncate(PolyMatrix.from_constant(inverse(eval_at_zero(P))), d)
    ell = max(1, ceil_log2(m))
    buckets = {}
    for j, dj in enumerate(d):
        if dj == 0:
            continue
        k = 1
        while dj * m > (2 ** k) * total:
            k += 1
        buckets.setdefault(k, []).append(j)
    assert max(buckets) <= ell, "truncation orders exceed the bucket range"
    P_bar, t, m_bar = partial_linearization(P)
    assert t > 0, "partial linearization of a non constant matrix has t > 0"
    orders = {k: ceil_div((2 ** k) * total, m * t) for k in buckets}
    levels = max((1 << (s - 1).bit_length()).bit_length() - 2 for s in orders.values())
    comps = high_order_comp(P_bar, levels - 1) if max(orders.values()) > 4 else None
    out = mod.zeros((m, m, max(d)))
    for k in sorted(buckets):
        cols = buckets[k]
        E = mod.zeros((m_bar, len(cols), 1))
        E[cols, np.arange(len(cols)), 0] = 1
        sol = series_sol(P_bar, PolyMatrix(E, mod), orders[k], comps)
        block = col_truncate(sol[:m, :], [d[j] for j in cols])
        out[:, cols, :] = block.padded(max(d))
    return PolyMatrix(out, mod)


def _add_into_columns(R, cols, block):
    length = max(R.length, block.length)
    out = R.padded(length).copy()
    out[:, cols, :] = (out[:, cols, :] + block.padded(length)) % R.modulus.p
    return PolyMatrix(out, R.modulus)


def truncated_product(F, G, d, monitor=None):
    """(F G) with column j truncated at order d_j.

    F is cut into chunks F = F0 + sum_k F_k x^(2^k delta), F0 = F rem x^(2 delta) and
    F_k = (F div x^(2^k delta)) rem x^(2^k delta), with delta = ceil(D / m), D = max(|d|, gamma)
    and gamma the sum of the degrees of the nonzero columns of F. Round k only involves the columns
    of F of degree >= 2^k delta and the columns of G whose order exceeds 2^k delta.

    Args:
        F: PolyMatrix n x m.
        G: PolyMatrix m x c.
        d: truncation orders, one per column of G.
        monitor: optional callable monitor(k, R, delta) invoked after each round with the
            partial result.

    Returns:
        PolyMatrix n x c.
    """
    F.modulus.check(G.modulus)
    if F.cols != G.rows:
        raise ValueError("inner dimensions disagree: {0} and {1}".format(F.shape, G.shape))
    d = check_degrees(d, G.cols)
    n, m = F.shape
    total = sum(d)
    if total == 0 or m == 0:
        return PolyMatrix.zeros(n, G.cols, F.modulus)
    fdeg = cdeg(F)
    D = max(total, fdeg.total)
    delta = ceil_div(D, m)
    ell = ceil_log2(m)
    R = col_truncate(pm_mul(F.rem_x(2 * delta), G), d)
    if monitor is not None:
        monitor(0, R, delta)
    for k in range(1, ell):
        w = (2 ** k) * delta
        I = [i for i, di in enumerate(fdeg) if di != NEG_INF and di >= w]
        J = [j for j, dj in enumerate(d) if dj > w]
        if I and J:
            chunk = F[:, I].div_x(w).rem_x(w)
            prod = col_truncate(pm_mul(chunk, G[I, J]), [d[j] - w for j in J])
            R = _add_into_columns(R, J, prod.shift(w))
        if monitor is not None:
            monitor(k, R, delta)
    return R
