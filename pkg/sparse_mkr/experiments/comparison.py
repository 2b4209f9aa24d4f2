"""
Comparison harness: cross-validate, fit and score every estimator on one task.

Methods run concurrently on a thread pool capped by settings.THREADS; results
are merged back in the order the methods were given. A failing method is
recorded in the report and does not stop the others.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from sparse_mkr import settings
from sparse_mkr.errors import SparseMKRError
from sparse_mkr.experiments.estimators import EstimatorSpec, Method, fit_estimator
from sparse_mkr.experiments.tasks import SyntheticTask, TaskSample, generate_task
from sparse_mkr.experiments.validation import cross_validate
from sparse_mkr.io import write_csv

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MethodReport:
    method: Method
    mse: float = math.nan
    sparsity: int = -1
    lam: float = math.nan
    widths: tuple[float, ...] = ()
    n_columns: int = 0
    converged: bool = False
    grid: np.ndarray | None = None
    fitted: np.ndarray | None = None
    truth: np.ndarray | None = None
    top_coefficients: np.ndarray | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    task: SyntheticTask
    folds: int
    entries: list[MethodReport]

    @property
    def failures(self) -> list[MethodReport]:
        return [e for e in self.entries if not e.ok]

    def entry(self, method: Method) -> MethodReport:
        for e in self.entries:
            if e.method == method:
                return e
        raise KeyError(method)

    def format_table(self) -> str:
        lines = [f"{'Method':<28}{'MSE':>12}{'Sparsity':>10}{'lambda':>10}  widths"]
        for e in self.entries:
            if e.ok:
                widths = ','.join(f"{w:g}" for w in e.widths)
                lines.append(f"{e.method.label:<28}{e.mse:>12.4f}{e.sparsity:>10d}{e.lam:>10g}  {widths}")
            else:
                lines.append(f"{e.method.label:<28}  failed: {e.error}")
        return "\n".join(lines)


def _run_method(spec: EstimatorSpec, sample: TaskSample, folds: int) -> MethodReport:
    train = sample.train
    try:
        selection = cross_validate(spec, train, folds)
        fit = fit_estimator(spec, selection.lam, selection.widths, train)
        fitted = fit.predict(sample.grid)
    except (SparseMKRError, np.linalg.LinAlgError) as exc:
        logger.error("%s failed: %s", spec.method.value, exc)
        return MethodReport(method=spec.method, error=str(exc))
    magnitudes = np.sort(np.abs(fit.coefficients))[::-1][:train.size]
    report = MethodReport(
        method=spec.method,
        mse=float(np.mean((fitted - sample.truth) ** 2)),
        sparsity=fit.sparsity,
        lam=selection.lam,
        widths=selection.widths,
        n_columns=fit.dictionary.n_columns,
        converged=fit.converged,
        grid=sample.grid,
        fitted=fitted,
        truth=sample.truth,
        top_coefficients=magnitudes,
    )
    logger.info("%s: mse %.6g, sparsity %d", spec.method.value, report.mse, report.sparsity)
    return report


def run_comparison(task: SyntheticTask, methods: list[EstimatorSpec], folds: int = 5) -> ExperimentReport:
    sample = generate_task(task)
    workers = max(1, min(settings.THREADS, len(methods)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_method, spec, sample, folds) for spec in methods]
        entries = [future.result() for future in futures]
    return ExperimentReport(task=task, folds=folds, entries=entries)


def write_report(report: ExperimentReport, directory) -> None:
    directory = Path(directory)
    rows = []
    for e in report.entries:
        widths = ';'.join(format(w, '.17g') for w in e.widths)
        rows.append([e.method.value, e.mse, e.sparsity, e.lam, widths, 'ok' if e.ok else 'failed'])
    write_csv(directory / 'report.csv', ['method', 'mse', 'sparsity', 'lambda', 'widths', 'status'], rows)
    for e in report.entries:
        if not e.ok:
            continue
        write_csv(
            directory / f"fit_{e.method.value}.csv",
            ['x', 'f_hat', 'f_true'],
            zip(e.grid, e.fitted, e.truth),
        )
        write_csv(
            directory / f"coeffs_{e.method.value}.csv",
            ['rank', 'abs_coefficient'],
            ((i + 1, v) for i, v in enumerate(e.top_coefficients)),
        )
