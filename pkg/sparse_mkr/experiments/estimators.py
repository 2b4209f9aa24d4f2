"""
The five kernel estimators of the comparison and a common fitting entry point.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from sparse_mkr.dictionary import Dictionary, TrainingSet, assemble_design, assemble_gram, centers_at
from sparse_mkr.kernels import Exponential, KernelSpec, gaussian
from sparse_mkr.multigrid import RefinementConfig, solve_multigrid
from sparse_mkr.solvers import (
    DEFAULT_PENALTY,
    SolverConfig,
    debiased_support,
    ridge_objective,
    solve_lasso,
    solve_mkl,
    solve_ridge,
)

logger = logging.getLogger(__name__)

DEFAULT_WIDTHS = {
    'gaussian': (1.5625, 6.25, 25.0, 100.0, 400.0),
    # one factor wider: gamma = 400 is about the mean site spacing of 40 samples on [-1, 1]
    'exponential': (0.390625, 1.5625, 6.25, 25.0, 100.0),
}
DEFAULT_LAMBDAS = (0.01, 0.1, 1.0, 10.0)
GTV_ALPHA = 1.99

# Loose tolerances for the many fits of cross-validation; the final fit uses `solver`
CV_SOLVER = SolverConfig(max_iters=3000, tol_rel_obj=1e-7, tol_kkt=1e-3)
CV_MIN_SPACING = 0.05


class Method(str, Enum):
    RKHS_RIDGE = 'rkhs_ridge'
    GEN_LASSO = 'gen_lasso'
    MKL_RIDGE = 'mkl_ridge'
    SINGLE_GTV = 'single_gtv'
    MULTI_GTV = 'multi_gtv'

    @property
    def label(self) -> str:
        return {
            Method.RKHS_RIDGE: 'L2-RKHS',
            Method.GEN_LASSO: 'L1-RKHS',
            Method.MKL_RIDGE: 'Multiple Kernel Learning',
            Method.SINGLE_GTV: 'Single Adaptive Kernel',
            Method.MULTI_GTV: 'Multiple Adaptive Kernels',
        }[self]

    @property
    def multi_kernel(self) -> bool:
        return self in (Method.MKL_RIDGE, Method.MULTI_GTV)

    @property
    def default_family(self) -> str:
        return 'exponential' if self in (Method.SINGLE_GTV, Method.MULTI_GTV) else 'gaussian'


def default_refinement() -> RefinementConfig:
    return RefinementConfig(initial_spacing=0.2, min_spacing=0.025)


def matched_lambdas(n_widths: int, lambdas=DEFAULT_LAMBDAS) -> tuple[float, ...]:
    """Log-spaced grid over the range of `lambdas` with n_widths * len(lambdas) points.

    A multi-kernel method has no width to select, so it gets as many lambda
    candidates as a single-kernel method has (lambda, width) pairs.
    """
    lo, hi = min(lambdas), max(lambdas)
    if lo <= 0 or lo == hi:
        return tuple(lambdas)
    return tuple(float(v) for v in np.geomspace(lo, hi, n_widths * len(lambdas)))


class EstimatorSpec(BaseModel):
    """One estimator with its kernel family and hyperparameter grid.

    Single-kernel methods select one width from `widths` by cross-validation;
    multi-kernel methods use every width at once and select lambda only.
    Unset widths and lambdas take the family and method defaults.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra='forbid')

    method: Method
    family: str | None = None
    alpha: float = Field(GTV_ALPHA, gt=0.0, le=2.0)
    widths: tuple[float, ...] | None = None
    lambdas: tuple[float, ...] | None = None
    mkl_penalty: float = Field(DEFAULT_PENALTY, gt=0.0)
    solver: SolverConfig = SolverConfig()
    cv_solver: SolverConfig = CV_SOLVER
    refinement: RefinementConfig | None = None

    @model_validator(mode='after')
    def _check(self):
        if self.family is None:
            object.__setattr__(self, 'family', self.method.default_family)
        if self.family not in DEFAULT_WIDTHS:
            raise ValueError(f"family must be 'gaussian' or 'exponential', got {self.family!r}")
        if self.widths is None:
            object.__setattr__(self, 'widths', DEFAULT_WIDTHS[self.family])
        if self.lambdas is None:
            lambdas = matched_lambdas(len(self.widths)) if self.method.multi_kernel else DEFAULT_LAMBDAS
            object.__setattr__(self, 'lambdas', lambdas)
        if not self.widths or any(w <= 0 for w in self.widths):
            raise ValueError("widths must be a non-empty list of positive numbers")
        if not self.lambdas or any(lam < 0 for lam in self.lambdas):
            raise ValueError("lambdas must be a non-empty list of non-negative numbers")
        if self.method.multi_kernel and len(self.widths) < 2:
            raise ValueError(f"{self.method.value} needs at least two kernels")
        if self.method in (Method.SINGLE_GTV, Method.MULTI_GTV) and self.refinement is None:
            object.__setattr__(self, 'refinement', default_refinement())
        return self

    def kernel(self, width: float) -> KernelSpec:
        if self.family == 'gaussian':
            return gaussian(width)
        return Exponential(alpha=self.alpha, gamma=width)

    @property
    def kernels(self) -> list[KernelSpec]:
        return [self.kernel(w) for w in self.widths]

    def validation_refinement(self) -> RefinementConfig | None:
        """The refinement schedule stopped at CV_MIN_SPACING, for cross-validation fits."""
        config = self.refinement
        if config is None or config.min_spacing >= CV_MIN_SPACING or config.initial_spacing <= CV_MIN_SPACING:
            return config
        return config.model_copy(update={'min_spacing': CV_MIN_SPACING})

    def candidates(self) -> list[tuple[float, tuple[float, ...]]]:
        """(lambda, widths) pairs in grid order: width-major, then lambda."""
        width_sets = [self.widths] if self.method.multi_kernel else [(w,) for w in self.widths]
        return [(lam, ws) for ws in width_sets for lam in self.lambdas]


@dataclass(frozen=True, eq=False)
class FittedEstimator:
    method: Method
    lam: float
    widths: tuple[float, ...]
    dictionary: Dictionary
    coefficients: np.ndarray
    sparsity: int
    objective: float
    converged: bool = True
    # SolverResult, MklResult or RefinementTrace of the underlying solve
    detail: object = None

    def predict(self, points) -> np.ndarray:
        return self.dictionary.predict(self.coefficients, points)


def fit_estimator(
    spec: EstimatorSpec,
    lam: float,
    widths: tuple[float, ...],
    train: TrainingSet,
    warm_start: FittedEstimator | None = None,
    validation: bool = False,
) -> FittedEstimator:
    """Penalized fit of one estimator at fixed hyperparameters.

    warm_start is an earlier fit of the same method, widths and training set
    (typically at a neighboring lambda); the l1 methods start from its
    coefficients. validation=True uses spec.cv_solver and the coarser
    validation refinement.
    """
    kernels = [spec.kernel(w) for w in widths]
    solver = (spec.cv_solver if validation else spec.solver).model_copy(update={'lam': float(lam)})
    if warm_start is not None and (warm_start.method != spec.method or warm_start.widths != tuple(widths)):
        warm_start = None
    method = spec.method
    sites = centers_at(train.sites)
    common = dict(method=method, lam=lam, widths=tuple(widths))

    if method == Method.RKHS_RIDGE:
        gram = assemble_gram(kernels[0], train)
        a = solve_ridge(gram, train.targets, lam)
        fit = FittedEstimator(
            **common,
            dictionary=assemble_design(kernels[:1], [sites], train),
            coefficients=a,
            sparsity=train.size,
            objective=ridge_objective(gram, train.targets, lam, a),
        )
    elif method == Method.GEN_LASSO:
        dictionary = assemble_design(kernels[:1], [sites], train)
        start = None
        if warm_start is not None and warm_start.coefficients.shape == (dictionary.n_columns,):
            start = warm_start.coefficients
        result = solve_lasso(
            dictionary.design, train.targets, solver, warm_start=start, column_index=dictionary.column_index
        )
        _, active = debiased_support(dictionary.design, train.targets, result.coeffs)
        fit = FittedEstimator(
            **common,
            dictionary=dictionary,
            coefficients=result.coeffs,
            sparsity=int(active.size),
            objective=result.objective,
            converged=result.converged,
            detail=result,
        )
    elif method == Method.MKL_RIDGE:
        grams = [assemble_gram(k, train) for k in kernels]
        result = solve_mkl(grams, train.targets, lam, spec.mkl_penalty, solver)
        # f(x) = sum_n mu_n sum_m a_m k_n(x, x_m)
        fit = FittedEstimator(
            **common,
            dictionary=assemble_design(kernels, [sites] * len(kernels), train),
            coefficients=np.concatenate([mu * result.coeffs for mu in result.mu]),
            sparsity=train.size,
            objective=result.objective,
            converged=result.converged,
            detail=result,
        )
    else:
        refinement = spec.validation_refinement() if validation else spec.refinement
        previous = warm_start.detail if warm_start is not None else None
        trace = solve_multigrid(kernels, train, lam, refinement, solver=solver, warm_start=previous)
        fit = FittedEstimator(
            **common,
            dictionary=trace.dictionary,
            coefficients=trace.result.coeffs,
            sparsity=trace.n_active,
            objective=trace.result.objective,
            converged=trace.result.converged,
            detail=trace,
        )
    logger.debug("%s fit at lambda=%g widths=%s: sparsity %d", method.value, lam, widths, fit.sparsity)
    return fit


def default_methods(widths=None, lambdas=None) -> list[EstimatorSpec]:
    """The five estimators; unset grids take the per-family and per-method defaults."""
    grids = {}
    if widths is not None:
        grids['widths'] = tuple(widths)
    if lambdas is not None:
        grids['lambdas'] = tuple(lambdas)
    return [EstimatorSpec(method=m, **grids) for m in Method]
