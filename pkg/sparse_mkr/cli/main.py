"""
Entry point of `python -m sparse_mkr`.

Exit codes: 0 success, 1 kernel not admissible, 2 invalid input,
3 solver or method failure.
"""

import argparse
import logging
import sys

from sparse_mkr import settings
from sparse_mkr.cli.commands import COMMANDS
from sparse_mkr.errors import SparseMKRError, TableMissing

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_FAILED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='sparse_mkr',
        description='Sparse multiple-kernel regression with l1 (generalized total-variation) penalties.',
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='log at DEBUG level')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except SparseMKRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, (ValueError, TableMissing)):
            return EXIT_INVALID
        return EXIT_FAILED
