"""
Command line front end.

Matrices are exchanged as text files: a header line "p rows cols" followed by one line per row
with the entries separated by single spaces. Tuples are a single line of naturals.
"""
import argparse
import sys

from krylovium.gf import PrimeModulus
from krylovium.matf import DenseMatrix
from krylovium.krylov import (AlgoConfig, KrylovSpec, krylov_matrix_hybrid, max_indices,
                              max_krylov_basis, naive_max_indices)
from krylovium.spectral import (frobenius_form, invariant_factors, kalman_decomposition,
                                matrix_minpoly, matrix_power, vector_minpoly)
from krylovium.utils import INSTANCE_FAMILIES, random_instance
from krylovium.selftest import SELFTEST_PRIMES, run_selftest
from krylovium.bench import run_bench

__all__ = ('InputFormatError', 'ALGO_NAMES', 'read_matrix', 'format_matrix', 'write_matrix',
           'read_tuple', 'format_poly', 'build_parser', 'main')

ALGO_NAMES = {
    'hybrid': 'hybrid',
    'kg': 'keller_gehrig',
    'keller_gehrig': 'keller_gehrig',
    'polmat': 'polmat_only',
    'polmat_only': 'polmat_only',
    'naive': 'naive',
}


class InputFormatError(ValueError):
    """Malformed matrix or tuple file.

    Attributes:
        path: the offending file.
        lineno: 1-based line number.
    """

    def __init__(self, message, path, lineno):
        super().__init__(message)
        self.message = message
        self.path = path
        self.lineno = lineno

    def __str__(self):
        return "{0}:{1}: {2}".format(self.path, self.lineno, self.message)


def _lines(path):
    with open(path, 'rb') as f:
        raw = f.read().split(b'\n')
    if raw and raw[-1] == b'':
        raw.pop()
    lines = []
    for lineno, line in enumerate(raw, start=1):
        try:
            lines.append(line.decode('utf-8'))
        except UnicodeDecodeError:
            raise InputFormatError("line is not valid UTF-8", path, lineno)
    return lines



def _naturals(line, path, lineno):
    try:
        values = [int(tok) for tok in line.split()]
    except ValueError:
        raise InputFormatError("expected integers, got {0!r}".format(line), path, lineno)
    if any(v < 0 for v in values):
        raise InputFormatError("negative entry", path, lineno)
    return values


def read_matrix(path):
    """Parse a matrix file into a DenseMatrix.

    Raises:
        InputFormatError: bad header, non-prime modulus, wrong row count or length, or an entry
            outside [0, p).
    """
    lines = _lines(path)
    if not lines:
        raise InputFormatError("empty file, expected a 'p rows cols' header", path, 1)
    header = _naturals(lines[0], path, 1)
    if len(header) != 3:
        raise InputFormatError("header must be 'p rows cols'", path, 1)
    p, rows, cols = header
    try:
        modulus = PrimeModulus(p)
    except ValueError as e:
        raise InputFormatError(str(e), path, 1)
    body = lines[1:]
    if len(body) < rows:
        raise InputFormatError("expected {0} rows, found {1}".format(rows, len(body)), path, len(lines) + 1)
    for k, extra in enumerate(body[rows:]):
        if extra.strip():
            raise InputFormatError("unexpected content after the last row", path, rows + 2 + k)
    entries = []
    for i in range(rows):
        lineno = i + 2
        row = _naturals(body[i], path, lineno)
        if len(row) != cols:
            raise InputFormatError("expected {0} entries, found {1}".format(cols, len(row)), path, lineno)
        if any(v >= p for v in row):
            raise InputFormatError("entry not reduced modulo {0}".format(p), path, lineno)
        entries.append(row)
    return DenseMatrix.from_rows(entries, modulus, cols=cols)


def format_matrix(M):
    lines = ["{0} {1} {2}".format(M.modulus.p, M.rows, M.cols)]
    lines.extend(" ".join(str(v) for v in row) for row in M.tolist())
    return "\n".join(lines) + "\n"


def write_matrix(M, path=None):
    """Write M to path, or to stdout when path is None."""
    if path is None:
        sys.stdout.write(format_matrix(M))
    else:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(format_matrix(M))


def read_tuple(path):
    lines = _lines(path)
    if len(lines) > 1 and any(line.strip() for line in lines[1:]):
        raise InputFormatError("a tuple file holds a single line", path, 2)
    return _naturals(lines[0] if lines else '', path, 1)


def format_poly(f):
    """Coefficients low to high; the zero polynomial is an empty line."""
    return " ".join(str(c) for c in f.tolist())


def _config(args):
    return AlgoConfig(omega=args.omega, c1=args.c1, c=args.c, strategy=ALGO_NAMES[args.algo],
                      reuse_kernel=args.reuse_kernel)


def _spec(args):
    A = read_matrix(args.matrix)
    U = read_matrix(args.vectors)
    return KrylovSpec(A, U)


def _cmd_indices(args):
    spec = _spec(args)
    strategy = ALGO_NAMES[args.algo]
    if strategy == 'naive':
        d = naive_max_indices(spec)
    elif strategy == 'polmat_only':
        d = max_indices(spec)
    else:
        d = max_krylov_basis(spec, _config(args)).indices
    print(" ".join(str(v) for v in d))
    return 0


def _cmd_krylov(args):
    spec = _spec(args)
    d = read_tuple(args.orders)
    if len(d) != spec.m:
        raise InputFormatError("expected {0} orders, found {1}".format(spec.m, len(d)), args.orders, 1)
    write_matrix(krylov_matrix_hybrid(spec, d, _config(args)), args.output)
    return 0


def _cmd_basis(args):
    spec = _spec(args)
    result = max_krylov_basis(spec, _config(args))
    write_matrix(result.basis, args.output)
    print("indices " + " ".join(str(v) for v in result.indices))
    print("labels " + " ".join("{0},{1}".format(j, k) for j, k in result.column_labels))
    return 0


def _cmd_minpoly(args):
    if args.vectors is None:
        print(format_poly(matrix_minpoly(read_matrix(args.matrix))))
    else:
        spec = _spec(args)
        for j in range(spec.m):
            print(format_poly(vector_minpoly(spec.A, spec.U.column(j))))
    return 0


def _cmd_invfactors(args):
    for f in invariant_factors(read_matrix(args.matrix)).invariant_factors:
        print(format_poly(f))
    return 0


def _cmd_frobenius(args):
    write_matrix(frobenius_form(read_matrix(args.matrix)), args.output)
    return 0


def _cmd_power(args):
    if args.k < 0:
        raise ValueError("k must be a natural number")
    write_matrix(matrix_power(read_matrix(args.matrix), args.k), args.output)
    return 0


def _cmd_kalman(args):
    data = kalman_decomposition(_spec(args), _config(args))
    write_matrix(data.P, args.output)
    print("nu {0}".format(data.nu))
    return 0


def _cmd_random(args):
    A, U = random_instance(args.prime, args.n, args.m, args.seed, args.stream, args.family)
    write_matrix(A, args.matrix_out)
    write_matrix(U, args.vectors_out)
    return 0


def _cmd_selftest(args):
    primes = SELFTEST_PRIMES if args.prime is None else (args.prime,)
    failures = run_selftest(primes, seed=args.seed, max_n=args.max_n, count=args.count,
                            verbose=args.verbose)
    for line in failures:
        print(line)
    print("{0} failure(s)".format(len(failures)) if failures else "all strategies agree")
    return 1 if failures else 0


def _cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(',') if s]
    names = [a for a in args.algos.split(',') if a]
    unknown = [a for a in names if a not in ALGO_NAMES]
    if unknown:
        raise ValueError("unknown algorithm(s): {0}".format(", ".join(unknown)))
    algos = [ALGO_NAMES[a] for a in names]
    df = run_bench(args.prime, args.seed, sizes, algos, m_ratio=args.m_ratio, verbose=args.verbose)
    if args.output is None:
        df.to_csv(sys.stdout, index=False)
    else:
        df.to_csv(args.output, index=False)
    return 0


def _algo_name(value):
    if value not in ALGO_NAMES:
        raise argparse.ArgumentTypeError("unknown algorithm {0!r}".format(value))
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog='krylovium',
                                     description='Krylov bases and spectral data of matrices over GF(p).')
    sub = parser.add_subparsers(dest='command', required=True)

    def with_pair(p, vectors=True):
        p.add_argument('--matrix', required=True, help='square matrix file A')
        if vectors:
            p.add_argument('--vectors', required=True, help='matrix file U, one vector per column')

    def with_algo(p, default='hybrid'):
        p.add_argument('--algo', type=_algo_name, default=default,
                       help='hybrid, kg (Keller-Gehrig), polmat or naive')
        p.add_argument('--omega', type=float, default=3.0, help='matrix multiplication exponent')
        p.add_argument('--c1', type=float, default=2.0, help='threshold constant')
        p.add_argument('--c', type=float, default=None, help='explicit threshold exponent')
        p.add_argument('--reuse-kernel', action='store_true', help='compute a single kernel basis')

    def with_output(p):
        p.add_argument('--output', '-o', default=None, help='output file, stdout by default')

    p = sub.add_parser('indices', help='print the maximal Krylov indices')
    with_pair(p)
    with_algo(p)
    p.set_defaults(func=_cmd_indices)

    p = sub.add_parser('krylov', help='write the Krylov matrix for given orders')
    with_pair(p)
    p.add_argument('--orders', required=True, help='tuple file with one order per vector')
    with_algo(p)
    with_output(p)
    p.set_defaults(func=_cmd_krylov)

    p = sub.add_parser('basis', help='write the maximal Krylov basis with its indices and labels')
    with_pair(p)
    with_algo(p)
    with_output(p)
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser('minpoly', help='minimal polynomial of A, or of each vector with --vectors')
    with_pair(p, vectors=False)
    p.add_argument('--vectors', default=None)
    p.set_defaults(func=_cmd_minpoly)

    p = sub.add_parser('invfactors', help='invariant factors of A, one per line')
    with_pair(p, vectors=False)
    p.set_defaults(func=_cmd_invfactors)

    p = sub.add_parser('frobenius', help='Frobenius normal form of A')
    with_pair(p, vectors=False)
    with_output(p)
    p.set_defaults(func=_cmd_frobenius)

    p = sub.add_parser('power', help='A^k')
    with_pair(p, vectors=False)
    p.add_argument('--k', type=int, required=True)
    with_output(p)
    p.set_defaults(func=_cmd_power)

    p = sub.add_parser('kalman', help='change of basis splitting off Orb(A, U)')
    with_pair(p)
    with_algo(p)
    with_output(p)
    p.set_defaults(func=_cmd_kalman)

    p = sub.add_parser('random', help='write a seeded random instance')
    p.add_argument('--prime', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--stream', type=int, default=0)
    p.add_argument('--family', choices=INSTANCE_FAMILIES, default=None)
    p.add_argument('--matrix-out', required=True)
    p.add_argument('--vectors-out', required=True)
    p.set_defaults(func=_cmd_random)

    p = sub.add_parser('selftest', help='cross-check every strategy on random instances')
    p.add_argument('--prime', type=int, default=None, help='a single prime; 2, 3, 97 and 2^62-57 by default')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--max-n', type=int, default=12)
    p.add_argument('--count', type=int, default=10, help='instances per prime')
    p.add_argument('--verbose', '-v', action='store_true')
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser('bench', help='time the strategies, CSV output')
    p.add_argument('--prime', type=int, default=2**62 - 57)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--sizes', default='16,32,64')
    p.add_argument('--algos', default='hybrid,kg')
    p.add_argument('--m-ratio', type=int, default=8, help='m = max(1, n // m_ratio)')
    p.add_argument('--verbose', '-v', action='store_true')
    with_output(p)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(*args):
    """Run the command line; returns the exit status."""
    parser = build_parser()
    try:
        ns = parser.parse_args(list(args) if args else None)
    except SystemExit as e:
        return e.code
    try:
        return ns.func(ns)
    except (ValueError, OSError) as e:
        print("error: {0}".format(e), file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
