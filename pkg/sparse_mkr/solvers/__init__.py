from sparse_mkr.solvers.config import SolverConfig, SolverResult, StepRule
from sparse_mkr.solvers.lasso import kkt_residual_lasso, lasso_objective, lipschitz_constant, solve_lasso
from sparse_mkr.solvers.mkl import DEFAULT_PENALTY, MklResult, combined_gram, mkl_objective, solve_mkl
from sparse_mkr.solvers.ridge import ridge_objective, solve_ridge
from sparse_mkr.solvers.support import (
    ACTIVITY_RATIO,
    active_support,
    activity_threshold,
    debiased_support,
    reduce_to_basic_support,
    refit_on_support,
)

__all__ = [
    'ACTIVITY_RATIO',
    'DEFAULT_PENALTY',
    'MklResult',
    'SolverConfig',
    'SolverResult',
    'StepRule',
    'active_support',
    'activity_threshold',
    'combined_gram',
    'debiased_support',
    'kkt_residual_lasso',
    'lasso_objective',
    'lipschitz_constant',
    'mkl_objective',
    'reduce_to_basic_support',
    'refit_on_support',
    'ridge_objective',
    'solve_lasso',
    'solve_mkl',
    'solve_ridge',
]
