"""
CSV input and output.

Every floating-point value is written with 17 significant digits so files
round-trip doubles exactly. A path of '-' means standard output.
"""

import csv
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from sparse_mkr.dictionary import Dictionary, TrainingSet
from sparse_mkr.errors import InvalidData

logger = logging.getLogger(__name__)


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    return str(value)


@contextmanager
def _open_out(path):
    if str(path) == '-':
        yield sys.stdout
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as handle:
        yield handle


def write_csv(path, header: list[str], rows) -> None:
    with _open_out(path) as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    if str(path) != '-':
        logger.debug("Wrote %s", path)


def read_training_csv(path) -> TrainingSet:
    """Read d coordinate columns followed by one target column; a header row is required."""
    path = Path(path)
    try:
        with path.open(newline='') as handle:
            rows = [row for row in csv.reader(handle) if row and any(cell.strip() for cell in row)]
    except OSError as exc:
        raise InvalidData(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise InvalidData(f"{path}: expected a header row and at least one data row")
    header, body = rows[0], rows[1:]
    try:
        [float(cell) for cell in header]
    except ValueError:
        pass
    else:
        raise InvalidData(f"{path}:1: header row required")
    if len(header) < 2:
        raise InvalidData(f"{path}:1: need at least one coordinate column and a target column")
    values = np.empty((len(body), len(header)))
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise InvalidData(f"{path}:{i + 2}: expected {len(header)} columns, got {len(row)}")
        try:
            values[i] = [float(cell) for cell in row]
        except ValueError as exc:
            raise InvalidData(f"{path}:{i + 2}: {exc}") from exc
    return TrainingSet(values[:, :-1], values[:, -1])


def write_training_csv(path, train: TrainingSet) -> None:
    header = [f"x{i + 1}" for i in range(train.dim)] + ['y']
    write_csv(path, header, (list(x) + [y] for x, y in zip(train.sites, train.targets)))


def write_coefficients(path, dictionary: Dictionary, coeffs) -> None:
    """One row per column: flat index, (block, position), center coordinates, coefficient."""
    centers = dictionary.column_centers()
    header = ['column', 'block', 'index'] + [f"z{i + 1}" for i in range(centers.shape[1])] + ['coefficient']
    rows = (
        [j, n, l] + list(centers[j]) + [float(a)]
        for j, ((n, l), a) in enumerate(zip(dictionary.column_index, coeffs))
    )
    write_csv(path, header, rows)


def write_trace(path, trace) -> None:
    rows = (
        [i, r.spacing, r.n_columns, r.objective, r.n_active]
        for i, r in enumerate(trace.rounds)
    )
    write_csv(path, ['round', 'spacing', 'columns', 'objective', 'active'], rows)
