"""
Support bookkeeping: activity thresholds, basic supports and debiasing refits.
"""

import logging

import numpy as np
import scipy.linalg

from sparse_mkr.errors import InvalidConfig, RankDeficientSupport

logger = logging.getLogger(__name__)

# Coefficients with |a_j| <= ratio * max |a| count as inactive
ACTIVITY_RATIO = 1e-6


def activity_threshold(a: np.ndarray, threshold_ratio: float = ACTIVITY_RATIO) -> float:
    a = np.asarray(a, dtype=float)
    return threshold_ratio * float(np.max(np.abs(a))) if a.size else 0.0


def active_support(a, threshold_ratio: float = ACTIVITY_RATIO) -> np.ndarray:
    """Flat indices of the active coefficients, in increasing order."""
    a = np.asarray(a, dtype=float)
    if not a.size or not np.any(a):
        return np.array([], dtype=int)
    return np.flatnonzero(np.abs(a) > activity_threshold(a, threshold_ratio))


def _numerical_rank(singular_values: np.ndarray, shape: tuple[int, int]) -> int:
    if not singular_values.size or singular_values[0] == 0:
        return 0
    tol = max(shape) * np.finfo(float).eps * singular_values[0]
    return int(np.sum(singular_values > tol))


def _check_design(design, targets) -> tuple[np.ndarray, np.ndarray]:
    design = np.asarray(design, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if design.ndim != 2 or design.shape[0] != targets.shape[0]:
        raise InvalidConfig(f"design of shape {design.shape} does not match {targets.shape[0]} targets")
    return design, targets


def refit_on_support(design, targets, active_set) -> np.ndarray:
    """Unpenalized least squares on the active columns, zeros elsewhere."""
    design, targets = _check_design(design, targets)
    support = np.asarray(active_set, dtype=int).reshape(-1)
    a = np.zeros(design.shape[1])
    if not support.size:
        return a
    sub = design[:, support]
    r = scipy.linalg.qr(sub, mode='r', pivoting=True)[0]
    diag = np.abs(np.diag(r))
    rank = _numerical_rank(diag, sub.shape)
    if rank < support.size:
        raise RankDeficientSupport(f"support of {support.size} columns has numerical rank {rank}")
    a[support] = scipy.linalg.lstsq(sub, targets)[0]
    return a


def debiased_support(design, targets, a, threshold_ratio: float = ACTIVITY_RATIO) -> tuple[np.ndarray, np.ndarray]:
    """Basic-support reduction followed by a refit.

    Returns the refitted coefficients and their active columns. If the
    reduced support is still numerically dependent the reduced coefficients
    are kept unrefitted.
    """
    design, targets = _check_design(design, targets)
    basic = reduce_to_basic_support(design, a, threshold_ratio)
    try:
        refit = refit_on_support(design, targets, active_support(basic, threshold_ratio))
    except RankDeficientSupport as exc:
        logger.warning("Refit skipped: %s", exc)
        refit = basic
    return refit, active_support(refit, threshold_ratio)


def reduce_to_basic_support(design, a, threshold_ratio: float = ACTIVITY_RATIO) -> np.ndarray:
    """Move along null-space directions of the active columns until they are independent.

    Each move keeps D a fixed, does not increase ||a||_1 and zeroes one active
    coefficient, so the result has at most rank(D) active columns.
    """
    design = np.asarray(design, dtype=float)
    a = np.array(a, dtype=float)
    while True:
        support = active_support(a, threshold_ratio)
        if not support.size:
            return a
        sub = design[:, support]
        _, s, vt = np.linalg.svd(sub)
        if _numerical_rank(s, sub.shape) == support.size:
            return a
        v = vt[-1]
        signs = np.sign(a[support])
        if signs @ v > 0:
            v = -v
        shrinking = signs * v < 0
        steps = -a[support][shrinking] / v[shrinking]
        j = int(np.argmin(steps))
        a[support] += steps[j] * v
        a[support[np.flatnonzero(shrinking)[j]]] = 0.0
        logger.debug("Basic support reduction dropped column %d", support[np.flatnonzero(shrinking)[j]])
