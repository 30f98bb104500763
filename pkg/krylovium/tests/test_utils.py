import numpy as np
import pytest

from krylovium.poly import Poly
from krylovium.spectral import vector_minpoly
from krylovium.utils import (INSTANCE_FAMILIES, block_diagonal, ceil_div, ceil_log2, companion_matrix,
                             get_num_threads, make_rng, random_instance, random_poly_matrix)


def test_ceil_helpers():
    assert ceil_div(7, 2) == 4
    assert ceil_div(8, 2) == 4
    assert ceil_div(0, 3) == 0
    assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    with pytest.raises(ValueError):
        ceil_log2(0)


def test_get_num_threads(monkeypatch):
    monkeypatch.delenv("KRYLOVIUM_THREADS", raising=False)
    assert get_num_threads() == 1
    monkeypatch.setenv("KRYLOVIUM_THREADS", "4")
    assert get_num_threads() == 4
    monkeypatch.setenv("KRYLOVIUM_THREADS", "lots")
    with pytest.warns(UserWarning):
        assert get_num_threads() == 1
    monkeypatch.setenv("KRYLOVIUM_THREADS", "0")
    with pytest.warns(UserWarning):
        assert get_num_threads(default=2) == 2


def test_make_rng_streams():
    a = make_rng(5, 0).integers(0, 2**62, size=4)
    b = make_rng(5, 0).integers(0, 2**62, size=4)
    c = make_rng(5, 1).integers(0, 2**62, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("family", INSTANCE_FAMILIES)
def test_random_instance(family):
    A, U = random_instance(97, 6, 3, seed=2, stream=1, family=family)
    assert A.shape == (6, 6)
    assert U.shape == (6, 3)
    A2, U2 = random_instance(97, 6, 3, seed=2, stream=1, family=family)
    assert A == A2 and U == U2


def test_random_instance_families():
    A, _ = random_instance(97, 5, 1, seed=0, family='nilpotent')
    assert np.all(np.tril(A.entries) == 0)
    A, _ = random_instance(97, 5, 1, seed=0, family='diagonal')
    assert np.all(A.entries[~np.eye(5, dtype=bool)] == 0)
    A, U = random_instance(97, 0, 2, seed=0)
    assert A.shape == (0, 0) and U.shape == (0, 2)
    with pytest.raises(ValueError):
        random_instance(97, 3, 1, seed=0, family='hermitian')


def test_companion_matrix():
    f = Poly([-2, 0, 0, 1], 97)
    C = companion_matrix(f)
    assert C.tolist() == [[0, 0, 2], [1, 0, 0], [0, 1, 0]]
    assert vector_minpoly(C, [1, 0, 0]) == f
    assert companion_matrix(Poly([3, 1], 97)).tolist() == [[94]]


def test_block_diagonal():
    f = Poly([1, 1], 97)
    M = block_diagonal([companion_matrix(f), companion_matrix(Poly([0, 0, 1], 97))], 97)
    assert M.tolist() == [[96, 0, 0], [0, 0, 0], [0, 1, 0]]


def test_random_poly_matrix_degrees():
    rng = make_rng(0)
    M = random_poly_matrix(rng, 97, 3, 3, 2, unit_constant=True, col_degrees=[0, 2, 1])
    assert M.degree <= 2
    for j, dj in enumerate([0, 2, 1]):
        for i in range(3):
            assert M[i, j].degree <= dj
            assert M[i, j].coeff(0) == (1 if i == j else 0)
