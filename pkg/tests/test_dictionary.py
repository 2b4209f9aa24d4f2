import math

import numpy as np
import pytest

from sparse_mkr.dictionary import (
    Box,
    TrainingSet,
    assemble_design,
    assemble_gram,
    build_grid,
    centers_at,
    default_bounds,
)
from sparse_mkr.errors import InvalidConfig, InvalidData, TooManyCenters
from sparse_mkr.io import read_training_csv, write_training_csv
from sparse_mkr.kernels import BesselPotential, Exponential, gaussian


class TestBuildGrid:
    def test_interval(self):
        grid = build_grid(Box.interval(-1.0, 1.0), 0.5)
        np.testing.assert_allclose(grid.centers[:, 0], [-1.0, -0.5, 0.0, 0.5, 1.0])
        np.testing.assert_array_equal(grid.indices[:, 0], np.arange(5))

    def test_unit_square_corners(self):
        grid = build_grid(Box(np.zeros(2), np.ones(2)), 1.0)
        np.testing.assert_allclose(grid.centers, [[0, 0], [0, 1], [1, 0], [1, 1]])

    def test_count_survives_rounding(self):
        assert build_grid(Box.interval(-1.0, 1.0), 0.05).size == 41

    def test_upper_end_off_lattice(self):
        grid = build_grid(Box.interval(0.0, 1.0), 0.3)
        np.testing.assert_allclose(grid.centers[:, 0], [0.0, 0.3, 0.6, 0.9])

    def test_center_cap(self):
        with pytest.raises(TooManyCenters):
            build_grid(Box.interval(0.0, 1.0), 1e-7)
        with pytest.raises(TooManyCenters):
            build_grid(Box.interval(0.0, 1.0), 0.1, max_centers=5)

    def test_invalid_spacing(self):
        with pytest.raises(InvalidConfig):
            build_grid(Box.interval(0.0, 1.0), 0.0)

    def test_empty_box(self):
        with pytest.raises(InvalidConfig):
            Box.interval(1.0, 0.0)


class TestTrainingSet:
    def test_vector_sites_become_a_column(self):
        train = TrainingSet([0.0, 1.0, 2.0], [1.0, 2.0, 3.0])
        assert train.sites.shape == (3, 1)
        assert train.size == 3
        assert train.dim == 1

    def test_repeated_sites(self):
        with pytest.raises(InvalidData, match="distinct"):
            TrainingSet([0.0, 0.0], [1.0, 2.0])

    def test_length_mismatch(self):
        with pytest.raises(InvalidData):
            TrainingSet([0.0, 1.0], [1.0])

    def test_non_finite(self):
        with pytest.raises(InvalidData):
            TrainingSet([0.0, np.nan], [1.0, 2.0])

    def test_empty(self):
        with pytest.raises(InvalidData):
            TrainingSet(np.zeros((0, 1)), [])


class TestAssembly:
    @pytest.fixture
    def two_sites(self):
        return TrainingSet([0.0, 1.0], [1.0, 1.0])

    def test_design_at_the_sites(self, laplace, two_sites):
        dictionary = assemble_design([laplace], [centers_at(two_sites.sites)], two_sites)
        e = math.exp(-1.0)
        np.testing.assert_allclose(dictionary.design, [[1.0, e], [e, 1.0]])

    def test_site_on_a_center(self, laplace):
        train = TrainingSet([0.5], [2.0])
        dictionary = assemble_design([laplace], [build_grid(Box.interval(0.0, 1.0), 0.5)], train)
        assert dictionary.design[0, 1] == 1.0

    def test_gram(self, laplace, two_sites):
        e = math.exp(-1.0)
        np.testing.assert_allclose(assemble_gram(laplace, two_sites), [[1.0, e], [e, 1.0]])

    def test_bessel_gram(self, two_sites):
        e = math.exp(-1.0)
        gram = assemble_gram(BesselPotential(s=2.0, gamma=1.0), two_sites)
        np.testing.assert_allclose(gram, [[0.5, 0.5 * e], [0.5 * e, 0.5]], rtol=1e-12)

    @pytest.mark.parametrize('spec', [Exponential(alpha=1.3, gamma=2.0), gaussian(5.0)])
    def test_single_site_gram(self, spec):
        assert assemble_gram(spec, TrainingSet([0.7], [1.0]))[0, 0] == 1.0

    def test_column_bookkeeping(self, laplace):
        train = TrainingSet([-0.5, 0.5], [0.0, 1.0])
        bounds = Box.interval(-1.0, 1.0)
        grids = [build_grid(bounds, 1.0), build_grid(bounds, 0.5)]
        dictionary = assemble_design([laplace, gaussian(4.0)], grids, train)
        assert [b.grid.size for b in dictionary.blocks] == [3, 5]
        assert dictionary.n_columns == 8
        assert dictionary.design.shape == (2, 8)
        for j, (n, l) in enumerate(dictionary.column_index):
            assert dictionary.column_of(n, l) == j
            np.testing.assert_array_equal(dictionary.column_centers()[j], grids[n].centers[l])
        with pytest.raises(IndexError):
            dictionary.column_of(1, 5)

    def test_predict_matches_design(self, laplace):
        train = TrainingSet([-0.4, 0.1, 0.9], [0.0, 1.0, 0.5])
        bounds = Box.interval(-1.0, 1.0)
        dictionary = assemble_design(
            [laplace, Exponential(alpha=1.5, gamma=3.0)], [build_grid(bounds, 0.25)] * 2, train
        )
        coeffs = np.linspace(-1.0, 1.0, dictionary.n_columns)
        np.testing.assert_allclose(dictionary.predict(coeffs, train.sites), dictionary.design @ coeffs, atol=1e-12)
        with pytest.raises(InvalidConfig):
            dictionary.predict(coeffs[:-1], train.sites)

    def test_assembly_is_deterministic(self, laplace):
        train = TrainingSet([-0.3, 0.2, 0.8], [1.0, 0.0, 2.0])
        grids = [build_grid(Box.interval(-1.0, 1.0), 0.1)]
        first = assemble_design([laplace], grids, train).design
        second = assemble_design([laplace], grids, train).design
        np.testing.assert_array_equal(first, second)

    def test_one_grid_per_kernel(self, laplace, two_sites):
        with pytest.raises(InvalidConfig):
            assemble_design([laplace, laplace], [centers_at(two_sites.sites)], two_sites)


def test_default_bounds_use_the_widest_kernel():
    train = TrainingSet([0.0, 1.0], [0.0, 0.0])
    bounds = default_bounds(train, [Exponential(alpha=1.0, gamma=4.0), Exponential(alpha=1.0, gamma=1.0)])
    np.testing.assert_allclose(bounds.lower, [-3.0])
    np.testing.assert_allclose(bounds.upper, [4.0])


class TestTrainingCsv:
    def test_written_file_reads_back(self, tmp_path):
        train = TrainingSet(np.array([[0.1, -0.3], [0.7, 0.2]]), [1.0 / 3.0, -2.5])
        write_training_csv(tmp_path / 'train.csv', train)
        assert (tmp_path / 'train.csv').read_text().splitlines()[0] == 'x1,x2,y'
        back = read_training_csv(tmp_path / 'train.csv')
        np.testing.assert_array_equal(back.sites, train.sites)
        np.testing.assert_array_equal(back.targets, train.targets)

    def test_header_required(self, write_file):
        with pytest.raises(InvalidData, match="header"):
            read_training_csv(write_file('bad.csv', "0.1,1\n0.2,2\n"))

    def test_ragged_row(self, write_file):
        with pytest.raises(InvalidData, match=":3:"):
            read_training_csv(write_file('bad.csv', "x1,y\n0.1,1\n0.2\n"))
