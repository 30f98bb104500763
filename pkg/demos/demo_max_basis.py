import time

from krylovium.gf import count_field_ops
from krylovium.krylov import AlgoConfig, KrylovSpec, max_krylov_basis, krylov_matrix_hybrid
from krylovium.utils import random_instance

if __name__ == "__main__":
    prime = 2**62 - 57
    n, m = 48, 3
    seed = 1

    A, U = random_instance(prime, n, m, seed, family='companion')
    spec = KrylovSpec(A, U)

    results = {}
    for strategy in ['hybrid', 'keller_gehrig', 'polmat_only', 'naive']:
        with count_field_ops() as counter:
            start = time.perf_counter()
            results[strategy] = max_krylov_basis(spec, AlgoConfig(strategy=strategy))
            elapsed = time.perf_counter() - start
        print("{0:>14}: indices {1}, {2:.3f} s, ~{3} field ops".format(
            strategy, results[strategy].indices, elapsed, counter.ops))

    ref = results['naive']
    print("all strategies agree:", all(r == ref for r in results.values()))
    print("orbit dimension:", ref.nu)

    # Krylov matrix with uneven orders, zeros allowed
    d = [n, 0, 5]
    K = krylov_matrix_hybrid(spec, d)
    print("K(A, U, {0}) has shape {1}".format(d, K.shape))
