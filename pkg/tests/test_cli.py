import csv
import io

import pytest

from sparse_mkr.cli.main import main


def read_rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestKernelTable:
    def test_exponential(self, capsys):
        assert main(['kernel-table', '--family', 'exp', '--alpha', '1', '--gamma', '1', '--range', '5', '--n', '11']) == 0
        rows = read_rows(capsys.readouterr().out)
        assert rows[0] == ['r', 'value']
        assert len(rows) == 12
        assert float(rows[6][0]) == 0.0
        assert float(rows[6][1]) == 1.0

    def test_bessel(self, capsys):
        assert main(['kernel-table', '--family', 'bessel', '--s', '2', '--gamma', '1', '--n', '11']) == 0
        rows = {float(r): float(v) for r, v in read_rows(capsys.readouterr().out)[1:]}
        assert rows[1.0] == pytest.approx(0.1839397, abs=1e-7)

    def test_two_dimensional_to_file(self, tmp_path):
        out = tmp_path / 'table.csv'
        assert main(['kernel-table', '--family', 'exp', '--dim', '2', '--n', '5', '--out', str(out)]) == 0
        rows = read_rows(out.read_text())
        assert rows[0] == ['x1', 'x2', 'value']
        assert len(rows) == 26

    def test_alpha_out_of_range(self, capsys):
        assert main(['kernel-table', '--family', 'exp', '--alpha', '3']) == 2
        assert "alpha must lie in (0, 2]" in capsys.readouterr().err


class TestCheck:
    def test_admissible(self, capsys):
        assert main(['check', '--family', 'exp', '--alpha', '1']) == 0
        assert "admissible            yes" in capsys.readouterr().out

    def test_gaussian_is_rejected(self, capsys):
        assert main(['check', '--family', 'exp', '--alpha', '2']) == 1
        assert "fourier_heavy_tailed  FAIL" in capsys.readouterr().out

    def test_bessel_order_below_dimension(self):
        assert main(['check', '--family', 'bessel', '--s', '0.5']) == 2

    def test_bessel_needs_an_order(self):
        assert main(['check', '--family', 'bessel']) == 2

    def test_invalid_probe_range(self):
        assert main(['check', '--family', 'exp', '--radius-range', '5', '1']) == 2


TOY_CONFIG = """
    [data]
    csv = "toy.csv"

    [fit]
    method = "single_gtv"
    lambda = {lam}
    widths = [1.0]
    alpha = 1.0

    [refinement]
    initial_spacing = 0.4
    min_spacing = 0.05

    [output]
    directory = "out"
"""


class TestFit:
    @pytest.fixture
    def toy(self, write_file):
        write_file('toy.csv', "x1,y\n0.3,1\n")

        def config(lam):
            return write_file('fit.toml', TOY_CONFIG.format(lam=lam))

        return config

    def test_single_site(self, toy, capsys):
        path = toy('0.001')
        assert main(['fit', str(path)]) == 0
        out = capsys.readouterr().out
        assert "sparsity    1" in out
        directory = path.parent / 'out'
        for name in ('coefficients.csv', 'fit.csv', 'trace.csv', 'objective.csv'):
            assert (directory / name).exists()

    def test_rerun_is_identical(self, toy, tmp_path):
        path = toy('0.001')
        assert main(['fit', str(path), '--out', str(tmp_path / 'a')]) == 0
        assert main(['fit', str(path), '--out', str(tmp_path / 'b')]) == 0
        for name in ('coefficients.csv', 'fit.csv', 'trace.csv'):
            assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()

    def test_negative_lambda(self, toy, capsys):
        path = toy('-1')
        assert main(['fit', str(path)]) == 2
        err = capsys.readouterr().err
        assert "fit.lambda" in err
        assert f"{path}:6:" in err

    def test_multi_kernel_with_one_width(self, toy, capsys):
        path = toy('0.001')
        path.write_text(path.read_text().replace('"single_gtv"', '"multi_gtv"'))
        assert main(['fit', str(path)]) == 2
        err = capsys.readouterr().err
        assert f"{path}:7: fit.widths:" in err
        assert "multi_gtv needs at least two widths" in err

    def test_unknown_family(self, toy, capsys):
        path = toy('0.001')
        path.write_text(path.read_text().replace('alpha = 1.0', 'family = "bessel"'))
        assert main(['fit', str(path)]) == 2
        assert f"{path}:8: fit.family:" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(['fit', str(tmp_path / 'missing.toml')]) == 2

    def test_ridge_on_a_task(self, write_file, capsys):
        path = write_file('ridge.toml', """
            [task]
            n_samples = 12
            seed = 4

            [fit]
            method = "rkhs_ridge"
            lambda = 0.1
            widths = [6.25]
        """)
        assert main(['fit', str(path)]) == 0
        assert "sparsity    12" in capsys.readouterr().out
        assert (path.parent / 'results' / 'coefficients.csv').exists()


COMPARE_CONFIG = """
    folds = 4

    [task]
    n_samples = 20
    seed = 7

    [[methods]]
    method = "rkhs_ridge"
    widths = [6.25, 25.0]
    lambdas = [0.1, 1.0]

    [output]
    directory = "report"
"""


class TestCompare:
    def test_single_method(self, write_file, capsys):
        path = write_file('compare.toml', COMPARE_CONFIG)
        assert main(['compare', str(path)]) == 0
        assert "L2-RKHS" in capsys.readouterr().out
        rows = read_rows((path.parent / 'report' / 'report.csv').read_text())
        assert len(rows) == 2
        assert rows[1][0] == 'rkhs_ridge'
        assert rows[1][2] == '20'

    def test_seed_override_is_reproducible(self, write_file, tmp_path):
        path = write_file('compare.toml', COMPARE_CONFIG)
        assert main(['compare', str(path), '--seed', '7', '--out', str(tmp_path / 'a')]) == 0
        assert main(['compare', str(path), '--seed', '7', '--out', str(tmp_path / 'b')]) == 0
        assert (tmp_path / 'a' / 'report.csv').read_bytes() == (tmp_path / 'b' / 'report.csv').read_bytes()

    def test_invalid_fold_override(self, write_file):
        path = write_file('compare.toml', COMPARE_CONFIG)
        assert main(['compare', str(path), '--folds', '1']) == 2

    def test_unknown_method(self, write_file, capsys):
        path = write_file('compare.toml', COMPARE_CONFIG.replace('rkhs_ridge', 'svm'))
        assert main(['compare', str(path)]) == 2
        assert "methods.0.method" in capsys.readouterr().err
