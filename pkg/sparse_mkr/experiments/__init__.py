from sparse_mkr.experiments.comparison import (
    ExperimentReport,
    MethodReport,
    run_comparison,
    write_report,
)
from sparse_mkr.experiments.estimators import (
    DEFAULT_LAMBDAS,
    DEFAULT_WIDTHS,
    EstimatorSpec,
    FittedEstimator,
    Method,
    default_methods,
    fit_estimator,
    matched_lambdas,
)
from sparse_mkr.experiments.tasks import SyntheticTask, TaskSample, generate_task, make_generator
from sparse_mkr.experiments.validation import Selection, contiguous_folds, cross_validate

__all__ = [
    'DEFAULT_LAMBDAS',
    'DEFAULT_WIDTHS',
    'EstimatorSpec',
    'ExperimentReport',
    'FittedEstimator',
    'Method',
    'MethodReport',
    'Selection',
    'SyntheticTask',
    'TaskSample',
    'contiguous_folds',
    'cross_validate',
    'default_methods',
    'fit_estimator',
    'generate_task',
    'make_generator',
    'matched_lambdas',
    'run_comparison',
    'write_report',
]
