import os
from warnings import warn

import numpy as np

from krylovium.gf import PrimeModulus
from krylovium.matf import DenseMatrix, SingularMatrixError, inverse
from krylovium.poly import Poly
from krylovium.polmat import PolyMatrix

__all__ = ('ceil_div', 'ceil_log2', 'get_num_threads', 'make_rng', 'random_matrix', 'random_poly',
           'random_poly_matrix', 'random_instance', 'companion_matrix', 'block_diagonal',
           'INSTANCE_FAMILIES')

INSTANCE_FAMILIES = ('dense', 'sparse', 'lowrank', 'companion', 'nilpotent', 'diagonal')


def ceil_div(a, b):
    return -(-a // b)


def ceil_log2(n):
    """Smallest k with 2**k >= n, for n >= 1."""
    if n < 1:
        raise ValueError("ceil_log2 needs n >= 1, got {0}".format(n))
    return (n - 1).bit_length()


def get_num_threads(default=1):
    """Worker count from the KRYLOVIUM_THREADS environment variable."""
    raw = os.environ.get("KRYLOVIUM_THREADS")
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        warn("KRYLOVIUM_THREADS={0!r} is not an integer, using {1}".format(raw, default))
        return default
    if value < 1:
        warn("KRYLOVIUM_THREADS={0} is not positive, using {1}".format(value, default))
        return default
    return value


def make_rng(seed, stream=0):
    """Counter based generator for instance `stream` of a run seeded with `seed`.

    The generator is numpy's Philox keyed with seed + 2**64 * stream and a zero counter, so
    instances can be regenerated one at a time in any order.
    """
    key = (int(seed) % 2**64) + (int(stream) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def _modulus(modulus):
    return modulus if isinstance(modulus, PrimeModulus) else PrimeModulus(modulus)


def random_matrix(rng, modulus, rows, cols, density=1.0):
    """Uniform random matrix; with density < 1 each entry is zero with probability 1 - density."""
    modulus = _modulus(modulus)
    vals = rng.integers(0, modulus.p, size=(rows, cols), dtype=np.int64)
    if density < 1.0:
        vals[rng.random((rows, cols)) >= density] = 0
    return DenseMatrix(vals, modulus)


def random_poly(rng, modulus, degree, monic=False):
    modulus = _modulus(modulus)
    coeffs = [int(c) for c in rng.integers(0, modulus.p, size=degree + 1, dtype=np.int64)]
    if monic:
        coeffs[-1] = 1
    return Poly(coeffs, modulus)


def random_poly_matrix(rng, modulus, rows, cols, degree, unit_constant=False, col_degrees=None):
    """Random polynomial matrix.

    Args:
        rng: numpy Generator.
        modulus: PrimeModulus or prime.
        rows, cols: dimensions.
        degree: bound on the entry degrees (ignored when col_degrees is given).
        unit_constant: when True, the constant coefficient is the identity (square case).
        col_degrees: optional per-column degree bounds.
    """
    modulus = _modulus(modulus)
    if col_degrees is None:
        col_degrees = [degree] * cols
    length = max(col_degrees, default=-1) + 1
    cube = rng.integers(0, modulus.p, size=(rows, cols, max(length, 1)), dtype=np.int64)
    for j, dj in enumerate(col_degrees):
        cube[:, j, dj + 1:] = 0
    if unit_constant:
        cube[:, :, 0] = 0
        cube[np.arange(min(rows, cols)), np.arange(min(rows, cols)), 0] = 1
    return PolyMatrix(cube, modulus)


def companion_matrix(f):
    """Companion matrix of a monic polynomial: ones below the diagonal, last column -f_0..-f_(d-1)."""
    d = f.degree
    mod = f.modulus
    out = mod.zeros((d, d))
    if d > 1:
        out[np.arange(1, d), np.arange(d - 1)] = 1
    if d > 0:
        out[:, d - 1] = (-f.coeffs[:d]) % mod.p
    return DenseMatrix(out, mod)


def block_diagonal(blocks, modulus):
    n = sum(b.rows for b in blocks)
    out = _modulus(modulus).zeros((n, n))
    at = 0
    for b in blocks:
        out[at:at + b.rows, at:at + b.cols] = b.entries
        at += b.rows
    return DenseMatrix(out, modulus)


def _random_invertible(rng, modulus, n):
    while True:
        P = random_matrix(rng, modulus, n, n)
        try:
            return P, inverse(P)
        except SingularMatrixError:
            continue


def _random_A(rng, modulus, n, family):
    p = modulus.p
    if family == 'dense':
        return random_matrix(rng, modulus, n, n)
    if family == 'sparse':
        return random_matrix(rng, modulus, n, n, density=0.2)
    if family == 'lowrank':
        r = int(rng.integers(0, n + 1))
        return random_matrix(rng, modulus, n, r) @ random_matrix(rng, modulus, r, n)
    if family == 'nilpotent':
        A = random_matrix(rng, modulus, n, n).entries
        return DenseMatrix(np.triu(A, 1), modulus)
    if family == 'diagonal':
        # few distinct eigenvalues, so the orbits are short
        vals = rng.integers(0, min(p, 3), size=n, dtype=np.int64)
        return DenseMatrix(np.diag(vals), modulus)
    # companion blocks sharing a factor give nontrivial invariant factors
    base = random_poly(rng, modulus, int(rng.integers(1, 3)), monic=True)
    blocks = []
    left = n
    while left > 0:
        extra = int(rng.integers(0, 3))
        f = base * random_poly(rng, modulus, extra, monic=True) if base.degree + extra <= left \
            else random_poly(rng, modulus, left, monic=True)
        blocks.append(companion_matrix(f))
        left -= f.degree
    A = block_diagonal(blocks, modulus)
    P, Pinv = _random_invertible(rng, modulus, n)
    return P @ A @ Pinv


def _random_U(rng, modulus, A, m):
    n = A.rows
    U = random_matrix(rng, modulus, n, m).entries.copy()
    if m >= 2:
        shape = int(rng.integers(0, 4))
        j = int(rng.integers(1, m))
        if shape == 1:
            U[:, j] = 0
        elif shape == 2:
            U[:, j] = U[:, j - 1]
        elif shape == 3:
            U[:, j] = (A @ DenseMatrix(U[:, j - 1:j], modulus)).entries[:, 0]
    return DenseMatrix(U, modulus)


def random_instance(modulus, n, m, seed, stream=0, family=None):
    """Reproducible random pair (A, U) with A n x n and U n x m.

    Args:
        modulus: PrimeModulus or prime.
        n, m: dimensions.
        seed: run seed.
        stream: instance number within the run.
        family: one of INSTANCE_FAMILIES; drawn from the generator when None.

    Returns:
        (A, U) as DenseMatrix.
    """
    modulus = _modulus(modulus)
    rng = make_rng(seed, stream)
    if family is None:
        family = INSTANCE_FAMILIES[int(rng.integers(0, len(INSTANCE_FAMILIES)))]
    if family not in INSTANCE_FAMILIES:
        raise ValueError("unknown instance family {0!r}".format(family))
    if n == 0:
        return DenseMatrix.zeros(0, 0, modulus), DenseMatrix.zeros(0, m, modulus)
    A = _random_A(rng, modulus, n, family)
    return A, _random_U(rng, modulus, A, m)
