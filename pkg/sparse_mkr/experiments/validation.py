"""
K-fold cross-validation over an estimator's (lambda, widths) grid.

For every width set and fold the lambdas are fitted from the largest to the
smallest, each fit warm-started from the previous one. Validation fits use
the estimator's looser cv_solver and validation refinement.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from sparse_mkr.dictionary import TrainingSet
from sparse_mkr.errors import InsufficientData, InvalidConfig, SparseMKRError
from sparse_mkr.experiments.estimators import EstimatorSpec, fit_estimator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Selection:
    lam: float
    widths: tuple[float, ...]
    cv_error: float
    scores: list[tuple[float, tuple[float, ...], float]] = field(default_factory=list)


def contiguous_folds(train: TrainingSet, folds: int) -> list[np.ndarray]:
    """Row indices of each fold: consecutive blocks of the lexicographically sorted sites."""
    if folds < 2:
        raise InvalidConfig(f"folds must be at least 2, got {folds}")
    if train.size < folds:
        raise InsufficientData(f"{train.size} samples cannot fill {folds} folds")
    order = np.lexsort(train.sites.T[::-1])
    return np.array_split(order, folds)


def _held_out_error(fit, train: TrainingSet, held: np.ndarray) -> float:
    return float(np.sum((fit.predict(train.sites[held]) - train.targets[held]) ** 2))


def cv_error(spec: EstimatorSpec, lam: float, widths: tuple[float, ...], train: TrainingSet, folds: list[np.ndarray]) -> float:
    """Validation squared error pooled over all folds, per sample, from cold starts."""
    total = 0.0
    for held in folds:
        keep = np.setdiff1d(np.arange(train.size), held)
        fit = fit_estimator(spec, lam, widths, train.subset(keep), validation=True)
        total += _held_out_error(fit, train, held)
    return total / train.size


def _path_errors(spec: EstimatorSpec, widths: tuple[float, ...], train: TrainingSet, folds: list[np.ndarray]) -> dict:
    """Pooled validation error of every lambda for one width set; failed lambdas score inf."""
    lambdas = sorted(set(spec.lambdas), reverse=True)
    totals = dict.fromkeys(lambdas, 0.0)
    for held in folds:
        part = train.subset(np.setdiff1d(np.arange(train.size), held))
        previous = None
        for lam in lambdas:
            try:
                fit = fit_estimator(spec, lam, widths, part, warm_start=previous, validation=True)
                totals[lam] += _held_out_error(fit, train, held)
                previous = fit
            except (SparseMKRError, np.linalg.LinAlgError) as exc:
                logger.debug("%s candidate lambda=%g widths=%s failed: %s", spec.method.value, lam, widths, exc)
                totals[lam] = math.inf
                previous = None
    return {lam: total / train.size for lam, total in totals.items()}


def cross_validate(spec: EstimatorSpec, train: TrainingSet, folds: int = 5) -> Selection:
    """Pick the (lambda, widths) candidate with the least validation error.

    Ties go to the larger lambda, then to the earlier candidate.
    """
    blocks = contiguous_folds(train, folds)
    paths = {}
    best = None
    scores = []
    for lam, widths in spec.candidates():
        if widths not in paths:
            paths[widths] = _path_errors(spec, widths, train, blocks)
        error = paths[widths][lam]
        scores.append((lam, widths, error))
        if best is None or error < best[2] or (error == best[2] and lam > best[0]):
            best = (lam, widths, error)
    if not math.isfinite(best[2]):
        raise InvalidConfig(f"no hyperparameter candidate of {spec.method.value} could be fitted")
    logger.info("%s: selected lambda=%g widths=%s (cv error %.6g)", spec.method.value, best[0], best[1], best[2])
    return Selection(lam=best[0], widths=best[1], cv_error=best[2], scores=scores)
