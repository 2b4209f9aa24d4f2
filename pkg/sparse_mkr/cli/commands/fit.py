"""fit: run one estimator at fixed hyperparameters and write its result files."""

import logging
from pathlib import Path

from sparse_mkr.cli.schemas import FitConfig, load_config
from sparse_mkr.experiments import fit_estimator, generate_task
from sparse_mkr.io import read_training_csv, write_coefficients, write_csv, write_trace
from sparse_mkr.multigrid import RefinementTrace
from sparse_mkr.solvers import MklResult, SolverResult

logger = logging.getLogger(__name__)

EXIT_NOT_CONVERGED = 3


def register(subparsers) -> None:
    parser = subparsers.add_parser('fit', help='fit one estimator from a TOML config')
    parser.add_argument('config', help='TOML config file')
    parser.add_argument('--out', default=None, help="output directory (overrides [output] directory)")
    parser.set_defaults(handler=run)


def run(args) -> int:
    config_path = Path(args.config)
    config: FitConfig = load_config(config_path, FitConfig)
    if config.data is not None:
        train = read_training_csv(config_path.parent / config.data.csv)
    else:
        train = generate_task(config.task).train
    out = Path(args.out or config_path.parent / config.output.directory)

    spec = config.estimator()
    fit = fit_estimator(spec, config.fit.lam, tuple(config.fit.widths), train)

    write_coefficients(out / 'coefficients.csv', fit.dictionary, fit.coefficients)
    fitted = fit.predict(train.sites)
    coords = [f"x{i + 1}" for i in range(train.dim)]
    write_csv(
        out / 'fit.csv',
        coords + ['y', 'f_hat'],
        (list(x) + [y, f] for x, y, f in zip(train.sites, train.targets, fitted)),
    )

    detail = fit.detail
    iterations, kkt = 0, None
    if isinstance(detail, RefinementTrace):
        write_trace(out / 'trace.csv', detail)
        detail = detail.result
    if isinstance(detail, SolverResult):
        write_csv(out / 'objective.csv', ['iteration', 'objective'], enumerate(detail.objective_trace))
        iterations, kkt = detail.iterations, detail.kkt_residual
    elif isinstance(detail, MklResult):
        write_csv(out / 'mkl_weights.csv', ['kernel', 'width', 'mu'], zip(range(len(detail.mu)), fit.widths, detail.mu))
        iterations = detail.inner_iterations

    print(f"method      {fit.method.label} ({fit.method.value})")
    print(f"objective   {fit.objective:.17g}")
    print(f"iterations  {iterations}")
    print(f"sparsity    {fit.sparsity}")
    print(f"kkt         {'n/a' if kkt is None else format(kkt, '.3g')}")
    print(f"converged   {'yes' if fit.converged else 'no'}")
    print(f"output      {out}")
    if not fit.converged:
        logger.warning("%s did not converge; results written to %s", fit.method.value, out)
        return EXIT_NOT_CONVERGED
    return 0
