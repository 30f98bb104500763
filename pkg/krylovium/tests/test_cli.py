import pandas as pd
import pytest

from krylovium.cli import InputFormatError, format_matrix, format_poly, main, read_matrix, read_tuple
from krylovium.poly import Poly
from krylovium.utils import companion_matrix, make_rng, random_instance, random_matrix


def write(path, text):
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_indices_example(tmp_path, capsys):
    A = write(tmp_path / 'A.mat', "97 2 2\n0 1\n0 0\n")
    U = write(tmp_path / 'U.mat', "97 2 2\n0 1\n1 0\n")
    assert main('indices', '--matrix', A, '--vectors', U) == 0
    assert capsys.readouterr().out == "2 0\n"
    for algo in ('kg', 'polmat', 'naive'):
        assert main('indices', '--matrix', A, '--vectors', U, '--algo', algo) == 0
        assert capsys.readouterr().out == "2 0\n"


def test_krylov_zero_orders(tmp_path, capsys):
    A = write(tmp_path / 'A.mat', "97 3 3\n1 2 3\n4 5 6\n7 8 9\n")
    U = write(tmp_path / 'U.mat', "97 3 2\n1 0\n0 1\n0 0\n")
    d = write(tmp_path / 'd.tup', "0 0\n")
    assert main('krylov', '--matrix', A, '--vectors', U, '--orders', d) == 0
    assert capsys.readouterr().out == "97 3 0\n\n\n\n"


def test_krylov_writes_file(tmp_path):
    A = write(tmp_path / 'A.mat', "97 2 2\n0 1\n0 0\n")
    U = write(tmp_path / 'U.mat', "97 2 1\n0\n1\n")
    d = write(tmp_path / 'd.tup', "3\n")
    out = tmp_path / 'K.mat'
    assert main('krylov', '--matrix', A, '--vectors', U, '--orders', d, '-o', str(out)) == 0
    assert out.read_text(encoding='utf-8') == "97 2 3\n0 1 0\n1 0 0\n"


def test_krylov_order_count_mismatch(tmp_path, capsys):
    A = write(tmp_path / 'A.mat', "97 2 2\n0 1\n0 0\n")
    U = write(tmp_path / 'U.mat', "97 2 1\n0\n1\n")
    d = write(tmp_path / 'd.tup', "1 2\n")
    assert main('krylov', '--matrix', A, '--vectors', U, '--orders', d) == 2
    assert "d.tup:1:" in capsys.readouterr().err


def test_basis_output(tmp_path, capsys):
    A = tmp_path / 'A.mat'
    A.write_text(format_matrix(companion_matrix(Poly([-1, 0, 0, 0, 1], 97))), encoding='utf-8')
    U = write(tmp_path / 'U.mat', "97 4 1\n1\n0\n0\n0\n")
    assert main('basis', '--matrix', str(A), '--vectors', U) == 0
    out = capsys.readouterr().out
    assert out == ("97 4 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n"
                   "indices 4\nlabels 0,0 0,1 0,2 0,3\n")


def test_basis_omega_near_two(tmp_path, capsys):
    A, U = random_instance(97, 8, 2, seed=13)
    a, u = tmp_path / 'A.mat', tmp_path / 'U.mat'
    a.write_text(format_matrix(A), encoding='utf-8')
    u.write_text(format_matrix(U), encoding='utf-8')
    assert main('basis', '--matrix', str(a), '--vectors', str(u), '--omega', '2.001') == 0
    fast = capsys.readouterr().out
    assert main('basis', '--matrix', str(a), '--vectors', str(u), '--algo', 'kg') == 0
    assert capsys.readouterr().out == fast



@pytest.mark.parametrize("text, lineno", [
    ("97 2 2\n1 2\n3\n", 3),
    ("97 2 2\n1 2\n3 97\n", 3),
    ("91 1 1\n0\n", 1),
    ("97 2\n", 1),
    ("97 2 2\n1 x\n0 0\n", 2),
    ("97 1 1\n1\n5\n", 3),
    ("97 3 1\n1\n", 3),
])
def test_malformed_matrix(tmp_path, capsys, text, lineno):
    A = write(tmp_path / 'A.mat', text)
    with pytest.raises(InputFormatError) as info:
        read_matrix(A)
    assert info.value.lineno == lineno
    assert main('minpoly', '--matrix', A) == 2
    err = capsys.readouterr().err
    assert "{0}:{1}:".format(A, lineno) in err
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize("data, lineno", [
    (b"97 1 1\n\xff\n", 2),
    (b"\xfe97 1 1\n0\n", 1),
    (b"97 2 1\n0\n1\n\xc3\n", 4),
])
def test_matrix_not_utf8(tmp_path, capsys, data, lineno):
    path = tmp_path / 'A.mat'
    path.write_bytes(data)
    A = str(path)
    with pytest.raises(InputFormatError) as info:
        read_matrix(A)
    assert info.value.lineno == lineno
    assert main('minpoly', '--matrix', A) == 2
    assert "{0}:{1}: line is not valid UTF-8".format(A, lineno) in capsys.readouterr().err


def test_crlf_line_endings(tmp_path):
    path = tmp_path / 'A.mat'
    path.write_bytes(b"97 2 2\r\n1 2\r\n3 4\r\n")
    assert read_matrix(str(path)).tolist() == [[1, 2], [3, 4]]



def test_unknown_algo_exits_nonzero(tmp_path):
    A = write(tmp_path / 'A.mat', "97 1 1\n0\n")
    assert main('indices', '--matrix', A, '--vectors', A, '--algo', 'magic') != 0


def test_missing_file(tmp_path, capsys):
    assert main('frobenius', '--matrix', str(tmp_path / 'nope.mat')) == 2
    assert capsys.readouterr().err.startswith("error:")


@pytest.mark.parametrize("p", [2, 97, 2**62 - 57])
def test_round_trip(tmp_path, p):
    for n, m in [(0, 3), (3, 0), (4, 2), (1, 1)]:
        M = random_matrix(make_rng(1, n), p, n, m)
        path = tmp_path / 'M{0}x{1}.mat'.format(n, m)
        path.write_text(format_matrix(M), encoding='utf-8')
        assert read_matrix(str(path)) == M


def test_read_tuple(tmp_path):
    assert read_tuple(write(tmp_path / 'a.tup', "3 0 2\n")) == [3, 0, 2]
    assert read_tuple(write(tmp_path / 'b.tup', "\n")) == []
    with pytest.raises(InputFormatError):
        read_tuple(write(tmp_path / 'c.tup', "1 -2\n"))
    with pytest.raises(InputFormatError):
        read_tuple(write(tmp_path / 'd.tup', "1\n2\n"))


def test_format_poly():
    assert format_poly(Poly([2, -3, 1], 97)) == "2 94 1"
    assert format_poly(Poly.zero(97)) == ""


def test_spectral_commands(tmp_path, capsys):
    A = write(tmp_path / 'A.mat', "97 2 2\n1 0\n0 2\n")
    U = write(tmp_path / 'U.mat', "97 2 1\n1\n0\n")
    assert main('minpoly', '--matrix', A) == 0
    assert capsys.readouterr().out == "2 94 1\n"
    assert main('minpoly', '--matrix', A, '--vectors', U) == 0
    assert capsys.readouterr().out == "96 1\n"
    assert main('invfactors', '--matrix', A) == 0
    assert capsys.readouterr().out == "2 94 1\n"
    assert main('frobenius', '--matrix', A) == 0
    assert capsys.readouterr().out == "97 2 2\n0 95\n1 3\n"
    assert main('power', '--matrix', A, '--k', '10') == 0
    assert capsys.readouterr().out == "97 2 2\n1 0\n0 54\n"
    assert main('kalman', '--matrix', A, '--vectors', U) == 0
    assert capsys.readouterr().out == "97 2 2\n1 0\n0 1\nnu 1\n"


def test_random_is_deterministic(tmp_path):
    outputs = []
    for k in range(2):
        A, U = tmp_path / 'A{0}.mat'.format(k), tmp_path / 'U{0}.mat'.format(k)
        assert main('random', '--prime', '97', '--n', '6', '--m', '2', '--seed', '3',
                    '--matrix-out', str(A), '--vectors-out', str(U)) == 0
        outputs.append((A.read_bytes(), U.read_bytes()))
    assert outputs[0] == outputs[1]
    A = read_matrix(str(tmp_path / 'A0.mat'))
    assert A == random_instance(97, 6, 2, seed=3)[0]


def test_selftest_small(capsys):
    assert main('selftest', '--prime', '97', '--max-n', '5', '--count', '3') == 0
    assert "all strategies agree" in capsys.readouterr().out


@pytest.mark.slow
def test_selftest_defaults():
    assert main('selftest') == 0


def test_bench_csv(tmp_path):
    out = tmp_path / 'bench.csv'
    assert main('bench', '--prime', '97', '--sizes', '4,8', '--algos', 'hybrid,kg,naive',
                '-o', str(out)) == 0
    df = pd.read_csv(out)
    assert list(df.columns) == ['algo', 'n', 'm', 'seed', 'wall_time_ns', 'field_op_estimate']
    assert len(df) == 6
    assert set(df['algo']) == {'hybrid', 'keller_gehrig', 'naive'}
    assert (df['field_op_estimate'] >= 0).all()


def test_bench_unknown_algo(capsys):
    assert main('bench', '--sizes', '4', '--algos', 'hybrid,fast') == 2
    assert "fast" in capsys.readouterr().err
