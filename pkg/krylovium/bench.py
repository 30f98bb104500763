"""
Timing harness comparing the maximal Krylov basis strategies.

Strategies run one after the other in this process on the same seeded instance, so their
timings do not interfere.
"""
import time
from warnings import warn

import pandas as pd

from krylovium.gf import count_field_ops
from krylovium.krylov import STRATEGIES, AlgoConfig, KrylovSpec, max_krylov_basis
from krylovium.utils import random_instance

__all__ = ('BENCH_COLUMNS', 'DEFAULT_ALGOS', 'POLMAT_SLOW_N', 'bench_instance', 'run_bench')

BENCH_COLUMNS = ['algo', 'n', 'm', 'seed', 'wall_time_ns', 'field_op_estimate']

DEFAULT_ALGOS = ('hybrid', 'keller_gehrig')

# beyond this size the polynomial route alone takes minutes in pure numpy
POLMAT_SLOW_N = 64


def bench_instance(prime, n, m, seed):
    """Dense random instance used for size n; the stream is n so sizes are independent."""
    return KrylovSpec(*random_instance(prime, n, m, seed, stream=n, family='dense'))


def run_bench(prime, seed, sizes, algos=DEFAULT_ALGOS, m_ratio=8, verbose=False):
    """Time max_krylov_basis for each strategy and size.

    Args:
        prime: field characteristic.
        seed: run seed.
        sizes: dimensions n to run.
        algos: strategies among 'hybrid', 'keller_gehrig', 'polmat_only', 'naive'.
        m_ratio: the number of vectors is max(1, n // m_ratio).
        verbose: print a line per run.

    Returns:
        pandas.DataFrame with columns algo, n, m, seed, wall_time_ns, field_op_estimate.

    Raises:
        ValueError: unknown strategy.
        RuntimeError: two strategies returned different bases.
    """
    for algo in algos:
        if algo not in STRATEGIES:
            raise ValueError("unknown strategy {0!r}, expected one of {1}".format(algo, STRATEGIES))
    rows = []
    for n in sizes:
        m = max(1, n // m_ratio)
        spec = bench_instance(prime, n, m, seed)
        reference = None
        for algo in algos:
            if algo in ('polmat_only', 'naive') and n > POLMAT_SLOW_N:
                warn("strategy {0} is slow at n={1}".format(algo, n))
            config = AlgoConfig(strategy=algo)
            with count_field_ops() as counter:
                start = time.perf_counter_ns()
                result = max_krylov_basis(spec, config)
                elapsed = time.perf_counter_ns() - start
            if reference is None:
                reference = result
            elif result.basis != reference.basis or result.indices != reference.indices:
                raise RuntimeError("strategies {0} and {1} disagree at n={2}".format(algos[0], algo, n))
            rows.append([algo, n, m, seed, elapsed, counter.ops])
            if verbose:
                print("{0:>14} n={1:<5} m={2:<4} {3:.3f} s".format(algo, n, m, elapsed / 1e9))
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)
