from krylovium.krylov import KrylovSpec
from krylovium.spectral import (charpoly, invariant_factors, kalman_decomposition, matrix_power,
                                vector_minpoly)
from krylovium.utils import random_instance

if __name__ == "__main__":
    prime = 97
    n, m = 10, 1
    seed = 3

    A, U = random_instance(prime, n, m, seed, family='companion')

    data = invariant_factors(A)
    for f in data.invariant_factors:
        print("invariant factor:", f)
    print("charpoly:", charpoly(A))
    print("Frobenius form:")
    for row in data.block_form.tolist():
        print(" ".join("{0:2d}".format(v) for v in row))

    u = U.column(0)
    print("minimal polynomial of u:", vector_minpoly(A, u))

    k = 10**18 + 9
    Ak = matrix_power(A, k)
    print("A^{0}[0, :] = {1}".format(k, Ak.tolist()[0]))

    split = kalman_decomposition(KrylovSpec(A, U))
    print("orbit dimension nu = {0}".format(split.nu))
    print("P^-1 U below nu is zero:", split.transformed_U[split.nu:, :].is_zero())
