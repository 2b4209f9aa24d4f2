import logging
import math

import numpy as np
import scipy.linalg

from sparse_mkr.errors import InvalidConfig, SingularSystem

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-10


def ridge_objective(gram, targets, lam: float, a) -> float:
    """||G a - y||^2 + lam a^T G a."""
    gram = np.asarray(gram, dtype=float)
    a = np.asarray(a, dtype=float)
    fitted = gram @ a
    return float(np.sum((fitted - targets) ** 2) + lam * a @ fitted)


def _check(gram, targets, lam) -> tuple[np.ndarray, np.ndarray, float]:
    gram = np.asarray(gram, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] != targets.shape[0]:
        raise InvalidConfig(f"gram of shape {gram.shape} does not match {targets.shape[0]} targets")
    if not (np.all(np.isfinite(gram)) and np.all(np.isfinite(targets))):
        raise InvalidConfig("gram and targets must be finite")
    lam = float(lam)
    if not math.isfinite(lam) or lam < 0:
        raise InvalidConfig(f"lambda must be a non-negative number, got {lam!r}")
    return gram, targets, lam


def solve_ridge(gram, targets, lam: float) -> np.ndarray:
    """Minimize ||G a - y||^2 + lam a^T G a through (G + lam I) a = y."""
    gram, targets, lam = _check(gram, targets, lam)
    m = gram.shape[0]
    if lam == 0:
        rcond = 1.0 / np.linalg.cond(gram) if np.any(gram) else 0.0
        if not rcond > m * np.finfo(float).eps:
            raise SingularSystem(f"gram is numerically singular (rcond {rcond:.3g}) and lambda = 0")
        try:
            a = scipy.linalg.solve(gram, targets, assume_a='sym')
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise SingularSystem(f"cannot solve the interpolation system: {exc}") from exc
        system = gram
    else:
        system = gram + lam * np.eye(m)
        try:
            a = scipy.linalg.cho_solve(scipy.linalg.cho_factor(system), targets)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            logger.debug("Cholesky of G + lambda I failed (%s); using the normal equations", exc)
            normal = gram.T @ gram + lam * gram
            a = scipy.linalg.lstsq(normal, gram.T @ targets)[0]
            system = None

    if system is not None:
        residual = float(np.linalg.norm(system @ a - targets))
        if residual > RESIDUAL_TOLERANCE * max(float(np.linalg.norm(targets)), 1.0):
            logger.warning("Ridge system solved with residual %.3g", residual)
    return a
