"""
l1-penalized least squares  min_a ||D a - y||^2 + lam ||a||_1.

The solver is monotone FISTA (the accelerated candidate is kept only when it
does not raise the objective) with a momentum restart whenever the candidate
is rejected. Every few iterations it also solves the stationarity equations

    2 D_S^T (D_S a_S - y) + lam sign(a_S) = 0

on the current signed support S. The exact candidate replaces the iterate
when it keeps the signs, lowers the KKT residual and does not raise the
objective, which lets the method finish at machine precision once the
support has been identified.
"""

import logging
import math

import numpy as np
import scipy.linalg

from sparse_mkr.errors import InvalidConfig
from sparse_mkr.solvers.config import SolverConfig, SolverResult, StepRule
from sparse_mkr.solvers.support import active_support, activity_threshold

logger = logging.getLogger(__name__)

LIPSCHITZ_SAFETY = 1.01
POWER_TOL = 1e-6
POWER_MAX_ITERS = 10000
KKT_EVERY = 10
BACKTRACK_FACTOR = 2.0
# Rounding slack on the objective when accepting a polished iterate
POLISH_SLACK = 1e-13


def lasso_objective(design, targets, lam: float, a) -> float:
    a = np.asarray(a, dtype=float)
    residual = design @ a - targets
    return float(residual @ residual + lam * np.sum(np.abs(a)))


def kkt_residual_lasso(design, targets, lam: float, a) -> float:
    """Largest violation of the subgradient optimality conditions; 0 at an optimum."""
    design = np.asarray(design, dtype=float)
    a = np.asarray(a, dtype=float)
    if not a.size:
        return 0.0
    g = 2.0 * design.T @ (design @ a - targets)
    violation = np.where(a != 0, np.abs(g + lam * np.sign(a)), np.maximum(0.0, np.abs(g) - lam))
    return float(np.max(violation))


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def lipschitz_constant(design: np.ndarray) -> float:
    """2 sigma_max(D)^2 by power iteration on D^T D, inflated by a safety factor."""
    if not design.size or not np.any(design):
        return 0.0
    rng = np.random.default_rng(0)
    v = rng.standard_normal(design.shape[1])
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(POWER_MAX_ITERS):
        w = design.T @ (design @ v)
        new = float(np.linalg.norm(w))
        if new == 0:
            break
        v = w / new
        if abs(new - estimate) <= POWER_TOL * new:
            estimate = new
            break
        estimate = new
    return 2.0 * estimate * LIPSCHITZ_SAFETY


def _polish(design, targets, lam, x):
    support = np.flatnonzero(x)
    if not support.size or support.size > design.shape[0]:
        return None
    signs = np.sign(x[support])
    sub = design[:, support]
    rhs = sub.T @ targets - 0.5 * lam * signs
    try:
        solution = scipy.linalg.lstsq(sub.T @ sub, rhs)[0]
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return None
    if np.any(np.sign(solution) != signs):
        return None
    out = np.zeros_like(x)
    out[support] = solution
    return out


def _check_inputs(design, targets, warm_start):
    design = np.asarray(design, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if design.ndim != 2 or design.shape[0] != targets.shape[0]:
        raise InvalidConfig(f"design of shape {design.shape} does not match {targets.shape[0]} targets")
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(targets))):
        raise InvalidConfig("design and targets must be finite")
    if warm_start is None:
        x0 = np.zeros(design.shape[1])
    else:
        x0 = np.array(warm_start, dtype=float).reshape(-1)
        if x0.shape != (design.shape[1],) or not np.all(np.isfinite(x0)):
            raise InvalidConfig(f"warm start must be a finite vector of length {design.shape[1]}")
    return design, targets, x0


def solve_lasso(
    design,
    targets,
    config: SolverConfig,
    warm_start=None,
    column_index=None,
) -> SolverResult:
    """Minimize ||D a - y||^2 + lam ||a||_1.

    column_index maps flat columns to (block, position) pairs for the active
    set; without it every column is reported as block 0. A result that did not
    meet both tolerances is returned with converged=False.
    """
    design, targets, x = _check_inputs(design, targets, warm_start)
    lam = config.lam

    def objective(a):
        return lasso_objective(design, targets, lam, a)

    lipschitz = lipschitz_constant(design)
    if lipschitz == 0.0:
        x = np.zeros(design.shape[1])
        return _result(design, targets, lam, x, [objective(x)], 0, True, column_index)
    backtracking = config.step_rule == StepRule.BACKTRACKING
    if backtracking:
        lipschitz = lipschitz / LIPSCHITZ_SAFETY / 16.0

    f_x = objective(x)
    trace = [f_x]
    y, t = x.copy(), 1.0
    kkt = kkt_residual_lasso(design, targets, lam, x)
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iters + 1):
        residual = design @ y - targets
        grad = 2.0 * design.T @ residual
        while True:
            step = 1.0 / lipschitz
            z = soft_threshold(y - step * grad, lam * step)
            if not backtracking:
                break
            diff = z - y
            smooth_z = np.sum((design @ z - targets) ** 2)
            bound = residual @ residual + grad @ diff + 0.5 * lipschitz * diff @ diff
            if smooth_z <= bound * (1.0 + 1e-12) + 1e-300:
                break
            lipschitz *= BACKTRACK_FACTOR

        f_z = objective(z)
        x_prev = x
        if f_z <= f_x:
            x, f_new = z, f_z
            t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            y = x + (t / t_new) * (z - x) + ((t - 1.0) / t_new) * (x - x_prev)
            t = t_new
        else:
            # restart momentum from the last accepted iterate
            f_new = f_x
            y, t = x.copy(), 1.0

        check = iteration % KKT_EVERY == 0 or iteration == config.max_iters
        if iteration % config.polish_every == 0:
            polished = _polish(design, targets, lam, x)
            if polished is not None:
                f_p = objective(polished)
                kkt_p = kkt_residual_lasso(design, targets, lam, polished)
                if f_p <= f_new + POLISH_SLACK * abs(f_new) and kkt_p < kkt_residual_lasso(design, targets, lam, x):
                    x, f_new, kkt = polished, f_p, kkt_p
                    y, t = x.copy(), 1.0
                    check = True

        rel_change = abs(f_x - f_new) / max(abs(f_new), np.finfo(float).tiny)
        f_x = f_new
        trace.append(f_x)
        if check:
            kkt = kkt_residual_lasso(design, targets, lam, x)
            logger.debug("lasso iteration %d: objective %.17g, kkt %.3g", iteration, f_x, kkt)
            if rel_change < config.tol_rel_obj and kkt < config.tol_kkt:
                converged = True
                break

    result = _result(design, targets, lam, x, trace, iteration, converged, column_index)
    if converged:
        logger.debug("lasso converged in %d iterations, %d active", iteration, len(result.active_set))
    else:
        logger.warning(
            "lasso did not converge in %d iterations (kkt residual %.3g)", iteration, result.kkt_residual
        )
    return result


def _result(design, targets, lam, x, trace, iterations, converged, column_index) -> SolverResult:
    support = active_support(x)
    if column_index is None:
        active = [(0, int(j)) for j in support]
    else:
        active = [(int(column_index[j][0]), int(column_index[j][1])) for j in support]
    return SolverResult(
        coeffs=x,
        objective_trace=np.asarray(trace, dtype=float),
        kkt_residual=kkt_residual_lasso(design, targets, lam, x),
        active_set=active,
        iterations=iterations,
        converged=converged,
        threshold=activity_threshold(x),
    )
