import numpy as np
import pytest
from pydantic import ValidationError

from sparse_mkr.dictionary import Box, TrainingSet, assemble_design, build_grid, default_bounds
from sparse_mkr.errors import EmptyModel, InvalidConfig
from sparse_mkr.kernels import Exponential
from sparse_mkr.multigrid import RefinementConfig, solve_multigrid
from sparse_mkr.solvers import SolverConfig, solve_lasso


@pytest.fixture
def schedule():
    return RefinementConfig(initial_spacing=0.4, min_spacing=0.05)


def brute_force(specs, train, lam, bounds, spacing):
    grid = build_grid(bounds, spacing)
    dictionary = assemble_design(specs, [grid] * len(specs), train)
    return solve_lasso(dictionary.design, train.targets, SolverConfig(lam=lam)).objective


class TestSolveMultigrid:
    def test_single_site(self, laplace, schedule):
        train = TrainingSet([0.3], [1.0])
        lam = 1e-3
        trace = solve_multigrid([laplace], train, lam, schedule)

        assert not trace.empty
        assert trace.n_active == 1
        (column,) = trace.active_columns
        center = trace.dictionary.column_centers()[column, 0]
        assert abs(center - 0.3) <= trace.final_spacing
        offset = np.exp(-abs(center - 0.3))
        assert trace.refit[column] == pytest.approx(1.0 / offset, rel=1e-10)

        bounds = default_bounds(train, [laplace])
        oracle = brute_force([laplace], train, lam, bounds, schedule.min_spacing)
        assert trace.objective == pytest.approx(oracle, rel=1e-4)

    def test_full_shrinkage_gives_an_empty_model(self, laplace, schedule):
        train = TrainingSet([0.3], [1.0])
        trace = solve_multigrid([laplace], train, 10.0, schedule)
        assert trace.empty
        assert len(trace.rounds) == 1
        assert trace.objective == pytest.approx(1.0)
        assert not np.any(trace.refit)
        with pytest.raises(EmptyModel) as excinfo:
            trace.raise_for_status()
        assert excinfo.value.trace is trace

    def test_round_schedule(self, laplace, schedule):
        train = TrainingSet([-0.5, 0.1, 0.6], [1.0, -0.5, 2.0])
        trace = solve_multigrid([laplace], train, 0.01, schedule)
        spacings = [r.spacing for r in trace.rounds]
        assert len(spacings) <= 4
        assert spacings[0] == 0.4
        assert all(b < a for a, b in zip(spacings, spacings[1:]))
        assert spacings[-1] >= 0.05 * (1 - 1e-9)

    def test_objective_does_not_increase(self, laplace, schedule):
        train = TrainingSet([-0.7, -0.2, 0.35, 0.8], [0.5, 1.5, -1.0, 0.7])
        trace = solve_multigrid([laplace, Exponential(alpha=1.0, gamma=8.0)], train, 0.05, schedule)
        objectives = [r.objective for r in trace.rounds]
        for before, after in zip(objectives, objectives[1:]):
            assert after <= before * (1 + 1e-8)

    def test_active_count_bounded_by_samples(self, schedule):
        train = TrainingSet(np.linspace(-1.0, 1.0, 5), [0.0, 2.0, -1.0, 1.0, 0.5])
        specs = [Exponential(alpha=1.0, gamma=g) for g in (1.0, 4.0, 16.0)]
        trace = solve_multigrid(specs, train, 0.01, schedule)
        assert all(r.n_active <= train.size for r in trace.rounds)
        assert trace.active_columns.size <= train.size

    @pytest.mark.parametrize('sites, targets, gamma', [
        ([-0.5, 0.1, 0.6], [1.0, -0.5, 2.0], 2.0),
        ([-0.45, 0.3], [1.0, 1.0], 1.0),
        ([-0.9, -0.35, 0.0, 0.45, 0.85], [0.2, 1.0, -0.3, 0.8, 0.1], 4.0),
    ])
    def test_matches_fine_grid_lasso(self, schedule, sites, targets, gamma):
        spec = Exponential(alpha=1.0, gamma=gamma)
        train = TrainingSet(sites, targets)
        bounds = Box.interval(-1.5, 1.7)
        lam = 0.01
        trace = solve_multigrid([spec], train, lam, schedule, bounds=bounds)
        oracle = brute_force([spec], train, lam, bounds, schedule.min_spacing)
        assert trace.objective == pytest.approx(oracle, rel=1e-4)

    def test_blocks_refine_independently(self, schedule):
        train = TrainingSet([-0.5, 0.5], [1.0, -1.0])
        specs = [Exponential(alpha=1.0, gamma=1.0), Exponential(alpha=1.0, gamma=10.0)]
        trace = solve_multigrid(specs, train, 0.01, schedule)
        sizes = [block.grid.size for block in trace.dictionary.blocks]
        assert len(sizes) == 2
        assert trace.dictionary.n_columns == sum(sizes)

    def test_warm_start_from_a_neighboring_lambda(self, schedule):
        spec = Exponential(alpha=1.0, gamma=2.0)
        train = TrainingSet([-0.5, 0.1, 0.6], [1.0, -0.5, 2.0])
        bounds = Box.interval(-1.5, 1.7)
        previous = solve_multigrid([spec], train, 0.02, schedule, bounds=bounds)
        cold = solve_multigrid([spec], train, 0.01, schedule, bounds=bounds)
        warm = solve_multigrid([spec], train, 0.01, schedule, bounds=bounds, warm_start=previous)
        assert warm.rounds[0].objective == pytest.approx(cold.rounds[0].objective, rel=1e-6)
        oracle = brute_force([spec], train, 0.01, bounds, schedule.min_spacing)
        assert warm.objective == pytest.approx(oracle, rel=1e-4)

    def test_warm_start_for_other_kernels_is_ignored(self, laplace, schedule):
        train = TrainingSet([-0.5, 0.1, 0.6], [1.0, -0.5, 2.0])
        previous = solve_multigrid([Exponential(alpha=1.0, gamma=8.0)], train, 0.01, schedule)
        cold = solve_multigrid([laplace], train, 0.01, schedule)
        warm = solve_multigrid([laplace], train, 0.01, schedule, warm_start=previous)
        assert warm.rounds[0].objective == pytest.approx(cold.rounds[0].objective, rel=1e-6)

    @pytest.mark.parametrize('patience, n_rounds', [(1, 2), (2, 3)])
    def test_stalled_rounds_stop_the_schedule(self, laplace, patience, n_rounds):
        # the site sits on every lattice, so no refined round improves the objective
        config = RefinementConfig(initial_spacing=0.4, min_spacing=0.05, patience=patience)
        train = TrainingSet([0.1], [1.0])
        trace = solve_multigrid([laplace], train, 0.1, config, bounds=Box.interval(-1.5, 1.7))
        assert len(trace.rounds) == n_rounds
        assert trace.n_active == 1

    def test_dimension_mismatch(self, laplace, schedule):
        train = TrainingSet(np.array([[0.0, 0.0], [1.0, 1.0]]), [0.0, 1.0])
        with pytest.raises(InvalidConfig):
            solve_multigrid([laplace], train, 0.1, schedule)


class TestRefinementConfig:
    def test_spacings_must_decrease(self):
        with pytest.raises(ValidationError):
            RefinementConfig(initial_spacing=0.1, min_spacing=0.1)

    def test_refine_factor_at_least_two(self):
        with pytest.raises(ValidationError):
            RefinementConfig(initial_spacing=0.4, min_spacing=0.05, refine_factor=1)

    def test_defaults(self, schedule):
        assert schedule.refine_factor == 2
        assert schedule.halo == 1
        assert schedule.patience == 2
