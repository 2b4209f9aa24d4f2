"""compare: run the five-estimator comparison and write the report files."""

from pathlib import Path

from pydantic import ValidationError

from sparse_mkr.cli.schemas import CompareConfig, load_config
from sparse_mkr.errors import InvalidConfig
from sparse_mkr.experiments import run_comparison, write_report

EXIT_METHOD_FAILED = 3


def register(subparsers) -> None:
    parser = subparsers.add_parser('compare', help='run the estimator comparison')
    parser.add_argument('config', nargs='?', default=None, help='TOML config file (default: built-in comparison)')
    parser.add_argument('--seed', type=int, default=None, help='override the task seed')
    parser.add_argument('--folds', type=int, default=None, help='override the number of CV folds')
    parser.add_argument('--out', default=None, help='output directory (overrides [output] directory)')
    parser.set_defaults(handler=run)


def run(args) -> int:
    if args.config is None:
        config, base = CompareConfig(), Path.cwd()
    else:
        config, base = load_config(args.config, CompareConfig), Path(args.config).parent
    overrides = {}
    if args.seed is not None:
        overrides['task'] = {**config.task.model_dump(), 'seed': args.seed}
    if args.folds is not None:
        overrides['folds'] = args.folds
    if overrides:
        try:
            config = CompareConfig.model_validate({**config.model_dump(by_alias=True), **overrides})
        except ValidationError as exc:
            raise InvalidConfig(f"invalid override: {exc}") from exc
    out = Path(args.out) if args.out else base / config.output.directory

    report = run_comparison(config.task, config.methods, config.folds)
    write_report(report, out)
    print(report.format_table())
    print(f"\nreport written to {out / 'report.csv'}")
    return EXIT_METHOD_FAILED if report.failures else 0
