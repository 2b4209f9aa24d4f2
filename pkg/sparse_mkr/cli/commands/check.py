"""check: print the admissibility report of a kernel."""

from sparse_mkr.cli.kernel_args import add_kernel_arguments, build_kernel
from sparse_mkr.kernels import ProbeConfig, check_admissibility, default_probe

EXIT_INADMISSIBLE = 1


def register(subparsers) -> None:
    parser = subparsers.add_parser('check', help='test a kernel for admissibility')
    add_kernel_arguments(parser)
    parser.add_argument('--radius-range', nargs=2, type=float, metavar=('R1', 'R2'))
    parser.add_argument('--frequency-range', nargs=2, type=float, metavar=('W1', 'W2'))
    parser.add_argument('--slope-cap', type=float, default=None)
    parser.set_defaults(handler=run)


def run(args) -> int:
    spec = build_kernel(args)
    probe = default_probe(spec)
    probe = ProbeConfig(
        radius_range=args.radius_range or probe.radius_range,
        frequency_range=args.frequency_range or probe.frequency_range,
        slope_cap=args.slope_cap if args.slope_cap is not None else probe.slope_cap,
    )
    report = check_admissibility(spec, probe)
    print(f"kernel: {spec!r}")
    print(report.format())
    return 0 if report.admissible else EXIT_INADMISSIBLE
