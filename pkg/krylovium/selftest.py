import itertools
import multiprocessing as mp

from krylovium.krylov import (AlgoConfig, KrylovSpec, keller_gehrig_basis, kernel_of_shifted_pencil,
                              krylov_matrix, krylov_matrix_hybrid, max_indices, max_krylov_basis,
                              naive_krylov_matrix, naive_max_indices)
from krylovium.orderbasis import hermite_diagonal
from krylovium.polmat import cdeg, is_column_reduced, pm_mul
from krylovium.utils import get_num_threads, make_rng, random_instance

__all__ = ('SELFTEST_PRIMES', 'selftest_instances', 'check_instance', 'process_chunk', 'run_selftest')

# 2**62 - 57 is the largest prime below 2**62
SELFTEST_PRIMES = (2, 3, 97, 2**62 - 57)

_LAYOUT_STREAM = 2**63


def selftest_instances(primes, seed, max_n, count):
    """Deterministic list of (p, n, m, stream) with 0 <= n <= max_n and 0 <= m <= n + 2."""
    rng = make_rng(seed, _LAYOUT_STREAM)
    out = []
    for p in primes:
        for stream in range(count):
            n = int(rng.integers(0, max_n + 1))
            m = int(rng.integers(0, n + 3))
            out.append((int(p), n, m, stream))
    return out


def check_instance(p, n, m, seed, stream):
    """Run every strategy on one random instance and list the disagreements found."""
    A, U = random_instance(p, n, m, seed, stream)
    spec = KrylovSpec(A, U)
    failures = []

    def expect(ok, what):
        if not ok:
            failures.append("p={0} n={1} m={2} stream={3}: {4}".format(p, n, m, stream, what))

    d = naive_max_indices(spec)
    expect(max_indices(spec) == d, "max_indices != naive_max_indices")

    if m > 0:
        kernel = kernel_of_shifted_pencil(spec)
        B = kernel.basis
        expect(pm_mul(spec.pencil(), B).is_zero(), "kernel basis does not annihilate [xI-A, -U]")
        expect(is_column_reduced(B), "kernel basis is not column reduced")
        expect(cdeg(B).total <= n, "kernel basis degrees exceed n")
        degs = [h.degree for h in hermite_diagonal(kernel.bottom)]
        expect(tuple(degs) == tuple(d), "Hermite diagonal degrees differ from the indices")

    reference = naive_krylov_matrix(spec, d)
    expect(krylov_matrix(spec, d) == reference, "krylov_matrix differs from naive iteration")
    expect(krylov_matrix_hybrid(spec, d) == reference, "krylov_matrix_hybrid differs from naive iteration")

    # unbalanced orders, zeros included
    rng = make_rng(seed + 1, stream)
    orders = [int(v) for v in rng.integers(0, n + 2, size=m)]
    reference = naive_krylov_matrix(spec, orders)
    expect(krylov_matrix(spec, orders) == reference, "krylov_matrix differs on random orders")
    expect(krylov_matrix_hybrid(spec, orders, AlgoConfig(c=1.0)) == reference,
           "krylov_matrix_hybrid with short doubling differs on random orders")

    kg = keller_gehrig_basis(spec)
    expect(kg.indices == d, "keller_gehrig_basis indices differ")
    for config in (AlgoConfig(), AlgoConfig(c=0.5), AlgoConfig(c=1.0), AlgoConfig(reuse_kernel=True),
                   AlgoConfig(strategy='polmat_only')):
        res = max_krylov_basis(spec, config)
        expect(res.basis == kg.basis and res.indices == kg.indices,
               "max_krylov_basis with {0} differs from keller_gehrig_basis".format(config))
    return failures


def process_chunk(args):
    """
    Process for run_selftest()
    """
    instances, seed, verbose = args
    failures = []
    for p, n, m, stream in instances:
        try:
            found = check_instance(p, n, m, seed, stream)
        except Exception as e:
            print((p, n, m, stream), e)
            found = ["p={0} n={1} m={2} stream={3}: raised {4!r}".format(p, n, m, stream, e)]
        if verbose:
            print("p={0} n={1} m={2} stream={3}: {4}".format(p, n, m, stream, "FAIL" if found else "ok"))
        failures.extend(found)
    return failures


def run_selftest(primes=SELFTEST_PRIMES, seed=0, max_n=12, count=10, numthreads=None, verbose=False):
    """Cross-strategy equivalence suite on seeded random instances.

    Every instance compares the indices, Krylov matrices and maximal bases from all strategies
    against the naive oracles, and checks the kernel basis contract.

    Args:
        primes: primes to draw instances over.
        seed: run seed; the same seed gives the same instances.
        max_n: largest dimension.
        count: instances per prime.
        numthreads: number of processes; KRYLOVIUM_THREADS (default 1) when None. With 1 the
            suite runs in this process.
        verbose: print one line per instance.

    Returns:
        List of failure descriptions, empty when every strategy agrees.
    """
    instances = selftest_instances(primes, seed, max_n, count)
    if numthreads is None:
        numthreads = get_num_threads()
    if numthreads <= 1 or len(instances) <= 1:
        return process_chunk((instances, seed, verbose))
    chunk_size = max(1, len(instances) // (3 * numthreads))
    chunks = [instances[k:k + chunk_size] for k in range(0, len(instances), chunk_size)]
    with mp.Pool(processes=numthreads) as mypool:
        output_lists = mypool.map(process_chunk, zip(chunks, itertools.repeat(seed), itertools.repeat(verbose)))
    return list(itertools.chain.from_iterable(output_lists))
