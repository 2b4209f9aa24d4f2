"""Command-line flags describing a single kernel."""

import argparse

from sparse_mkr.errors import InvalidSpec
from sparse_mkr.kernels import BesselPotential, Exponential, KernelSpec, Transformed


def add_kernel_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('kernel')
    group.add_argument('--family', choices=['exp', 'bessel'], required=True)
    group.add_argument('--alpha', type=float, default=1.0, help='exponential smoothness in (0, 2]')
    group.add_argument('--gamma', type=float, default=1.0, help='width parameter')
    group.add_argument('--s', type=float, default=None, help='Bessel potential order, > dim')
    group.add_argument('--dim', type=int, default=1)
    group.add_argument('--mix', default=None, help="mixing matrix rows, e.g. '1,0;0,2'")
    group.add_argument('--extrapolate', action='store_true', help='extrapolate Bessel tables beyond their range')


def parse_mix(text: str) -> tuple[tuple[float, ...], ...]:
    try:
        return tuple(tuple(float(v) for v in row.split(',')) for row in text.split(';'))
    except ValueError as exc:
        raise InvalidSpec(f"mix must look like 'a11,a12;a21,a22', got {text!r}") from exc


def build_kernel(args: argparse.Namespace) -> KernelSpec:
    if args.family == 'exp':
        spec = Exponential(alpha=args.alpha, gamma=args.gamma, dim=args.dim)
    else:
        if args.s is None:
            raise InvalidSpec("--s is required for the bessel family")
        spec = BesselPotential(s=args.s, gamma=args.gamma, dim=args.dim, extrapolate=args.extrapolate)
    if args.mix is not None:
        spec = Transformed(base=spec, mix=parse_mix(args.mix))
    return spec
