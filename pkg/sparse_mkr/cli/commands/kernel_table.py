"""kernel-table: sample a kernel profile for plotting."""

import numpy as np

from sparse_mkr.cli.kernel_args import add_kernel_arguments, build_kernel
from sparse_mkr.errors import InvalidSpec
from sparse_mkr.io import write_csv
from sparse_mkr.kernels import kernel_matrix


def register(subparsers) -> None:
    parser = subparsers.add_parser('kernel-table', help='write kernel samples as CSV')
    add_kernel_arguments(parser)
    parser.add_argument('--range', dest='radius', type=float, default=5.0, help='largest |offset| per axis')
    parser.add_argument('--n', type=int, default=101, help='samples per axis')
    parser.add_argument('--out', default='-', help="output CSV path, '-' for stdout")
    parser.set_defaults(handler=run)


def run(args) -> int:
    spec = build_kernel(args)
    if args.n < 2 or not args.radius > 0:
        raise InvalidSpec("--n must be at least 2 and --range positive")
    if spec.dim > 2:
        raise InvalidSpec(f"kernel-table writes d = 1 or d = 2 samples, got d={spec.dim}")
    axis = np.linspace(-args.radius, args.radius, args.n)
    origin = np.zeros((1, spec.dim))
    if spec.dim == 1:
        values = kernel_matrix(spec, axis[:, None], origin)[:, 0]
        write_csv(args.out, ['r', 'value'], zip(axis, values))
    else:
        x1, x2 = np.meshgrid(axis, axis, indexing='ij')
        offsets = np.column_stack([x1.reshape(-1), x2.reshape(-1)])
        values = kernel_matrix(spec, offsets, origin)[:, 0]
        write_csv(args.out, ['x1', 'x2', 'value'], zip(offsets[:, 0], offsets[:, 1], values))
    return 0
