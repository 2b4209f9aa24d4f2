"""
Adaptive center refinement for the multi-kernel l1 problem.

Round 0 solves the LASSO on one coarse lattice shared by all kernel blocks.
Every later round divides the spacing by refine_factor and, block by block,
keeps only the fine lattice points within `halo` coarse cells of an active
center. Lattice points are integer multiples of the spacing from the lower
box corner, so each refined lattice contains the active coarse centers and
the warm start reproduces the previous fit.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from sparse_mkr.dictionary import (
    Box,
    Dictionary,
    TrainingSet,
    assemble_design,
    build_grid,
    default_bounds,
    grid_from_indices,
)
from sparse_mkr.errors import EmptyModel, InvalidConfig
from sparse_mkr.kernels import KernelSpec
from sparse_mkr.solvers import SolverConfig, SolverResult, debiased_support, solve_lasso

logger = logging.getLogger(__name__)

# Relative slack when comparing a refined spacing with min_spacing
SPACING_SLACK = 1e-9
MIN_IMPROVEMENT = 1e-8


class RefinementConfig(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra='forbid')

    initial_spacing: float = Field(gt=0.0)
    min_spacing: float = Field(gt=0.0)
    refine_factor: int = Field(2, ge=2)
    halo: int = Field(1, ge=0)
    max_rounds: int = Field(10, ge=0)
    # consecutive rounds improving the objective by less than MIN_IMPROVEMENT before stopping
    patience: int = Field(2, ge=1)

    @model_validator(mode='after')
    def _check_spacings(self):
        if not self.min_spacing < self.initial_spacing:
            raise ValueError("min_spacing must be smaller than initial_spacing")
        return self


@dataclass(frozen=True)
class RoundSummary:
    spacing: float
    n_columns: int
    objective: float
    n_active: int


@dataclass(frozen=True, eq=False)
class RefinementTrace:
    rounds: list[RoundSummary]
    result: SolverResult
    dictionary: Dictionary
    refit: np.ndarray
    empty: bool = False
    active_columns: np.ndarray = field(default_factory=lambda: np.array([], dtype=int))

    @property
    def final_spacing(self) -> float:
        return self.rounds[-1].spacing

    @property
    def n_active(self) -> int:
        return self.rounds[-1].n_active

    @property
    def objective(self) -> float:
        return self.rounds[-1].objective

    def raise_for_status(self) -> 'RefinementTrace':
        if self.empty:
            raise EmptyModel("the coarsest round selected no center", trace=self)
        return self


def _refined_indices(active: np.ndarray, factor: int, halo: int, upper: np.ndarray) -> np.ndarray:
    dim = upper.size
    if not active.size:
        return np.zeros((0, dim), dtype=np.int64)
    reach = range(-halo * factor, halo * factor + 1)
    offsets = np.array(list(itertools.product(reach, repeat=dim)), dtype=np.int64)
    candidates = (active[:, None, :] * factor + offsets[None, :, :]).reshape(-1, dim)
    inside = np.all((candidates >= 0) & (candidates <= upper), axis=1)
    return np.unique(candidates[inside], axis=0)


def _lattice_size(bounds: Box, spacing: float) -> np.ndarray:
    return np.floor(bounds.extent / spacing + SPACING_SLACK).astype(np.int64)


def _same_box(a: Box | None, b: Box | None) -> bool:
    if a is None or b is None:
        return False
    return np.array_equal(a.lower, b.lower) and np.array_equal(a.upper, b.upper)


def _coarse_start(previous: RefinementTrace, dictionary: Dictionary, spacing: float) -> np.ndarray | None:
    """Nearest-center transfer of a finished trace onto a coarse lattice over the same bounds.

    Returns None when the trace was built for other kernels or other bounds.
    """
    blocks = previous.dictionary.blocks
    if len(blocks) != len(dictionary.blocks):
        return None
    start = np.zeros(dictionary.n_columns)
    coeffs = previous.dictionary.split(previous.result.coeffs)
    for n, (old, new, a) in enumerate(zip(blocks, dictionary.blocks, coeffs)):
        if old.spec != new.spec or old.grid.indices is None or not _same_box(old.grid.bounds, new.grid.bounds):
            return None
        upper = new.grid.indices.max(axis=0)
        position = {tuple(ix): l for l, ix in enumerate(new.grid.indices.tolist())}
        on = np.flatnonzero(a)
        nearest = np.clip(np.rint(old.grid.indices[on] * (old.grid.spacing / spacing)), 0, upper).astype(np.int64)
        for l, ix in zip(on, nearest.tolist()):
            start[dictionary.column_of(n, position[tuple(ix)])] += a[l]
    return start


def solve_multigrid(
    specs: list[KernelSpec],
    train: TrainingSet,
    lam: float,
    config: RefinementConfig,
    solver: SolverConfig | None = None,
    bounds: Box | None = None,
    warm_start: RefinementTrace | None = None,
) -> RefinementTrace:
    """Coarse-to-fine LASSO over N kernel blocks.

    warm_start is a trace of an earlier solve on the same data and kernels,
    usually at a neighboring lambda; its active centers are moved to the
    nearest round 0 center to start the first solve.
    """
    if train.dim not in (1, 2):
        raise InvalidConfig(f"refinement supports d in {{1, 2}}, got d={train.dim}")
    if any(spec.dim != train.dim for spec in specs):
        raise InvalidConfig("every kernel must match the dimension of the data")
    solver = (solver or SolverConfig()).model_copy(update={'lam': float(lam)})
    bounds = bounds or default_bounds(train, specs)

    def summarize(dictionary, result):
        _, active = debiased_support(dictionary.design, train.targets, result.coeffs)
        return active

    spacing = config.initial_spacing
    coarse = build_grid(bounds, spacing)
    dictionary = assemble_design(specs, [coarse] * len(specs), train)
    start = _coarse_start(warm_start, dictionary, spacing) if warm_start is not None else None
    result = solve_lasso(
        dictionary.design, train.targets, solver, warm_start=start, column_index=dictionary.column_index
    )
    active = summarize(dictionary, result)
    rounds = [RoundSummary(spacing, dictionary.n_columns, result.objective, int(active.size))]
    logger.debug("round 0: spacing %g, %d columns, objective %.17g", spacing, dictionary.n_columns, result.objective)

    if not result.active_set:
        logger.warning("Round 0 selected no center at lambda=%g; returning the zero model", lam)
        return RefinementTrace(
            rounds=rounds, result=result, dictionary=dictionary,
            refit=np.zeros(dictionary.n_columns), empty=True,
        )

    stalled = 0
    for round_no in range(1, config.max_rounds + 1):
        fine = spacing / config.refine_factor
        if fine < config.min_spacing * (1.0 - SPACING_SLACK):
            break
        upper = _lattice_size(bounds, fine)
        grids, warm = [], []
        for block, a in zip(dictionary.blocks, dictionary.split(result.coeffs)):
            on = np.flatnonzero(a)
            indices = _refined_indices(block.grid.indices[on], config.refine_factor, config.halo, upper)
            grid = grid_from_indices(bounds, fine, indices)
            position = {tuple(ix): l for l, ix in enumerate(indices.tolist())}
            start = np.zeros(grid.size)
            for l, ix in zip(on, block.grid.indices[on] * config.refine_factor):
                start[position[tuple(ix.tolist())]] = a[l]
            grids.append(grid)
            warm.append(start)

        previous = result.objective
        dictionary = assemble_design(specs, grids, train)
        result = solve_lasso(
            dictionary.design, train.targets, solver,
            warm_start=np.concatenate(warm), column_index=dictionary.column_index,
        )
        active = summarize(dictionary, result)
        spacing = fine
        rounds.append(RoundSummary(spacing, dictionary.n_columns, result.objective, int(active.size)))
        logger.debug(
            "round %d: spacing %g, %d columns, objective %.17g", round_no, spacing, dictionary.n_columns, result.objective
        )
        if previous - result.objective < MIN_IMPROVEMENT * max(abs(previous), np.finfo(float).tiny):
            stalled += 1
            if stalled >= config.patience:
                break
        else:
            stalled = 0

    refit, active = debiased_support(dictionary.design, train.targets, result.coeffs)
    logger.info(
        "Refinement finished after %d rounds: spacing %g, %d active centers", len(rounds), spacing, active.size
    )
    return RefinementTrace(
        rounds=rounds, result=result, dictionary=dictionary, refit=refit, active_columns=active,
    )
