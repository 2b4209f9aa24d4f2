"""
Multiple-kernel ridge regression with a learned kernel combination.

    min_{mu >= 0, a}  ||G_mu a - y||^2 + lam a^T G_mu a + eta ||mu||^2,   G_mu = sum_n mu_n G_n

The problem is not jointly convex. It is solved by alternating exact block
minimizations: a ridge solve on G_mu for fixed mu, then for fixed a the
objective is the convex quadratic ||B mu - y||^2 + lam c^T mu + eta ||mu||^2 in
mu (B = [G_n a], c_n = a^T G_n a), minimized over mu >= 0 as a non-negative
least-squares problem. The best iterate is returned; no global optimality
is claimed.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import nnls

from sparse_mkr.errors import InvalidConfig, NotConverged, SingularSystem
from sparse_mkr.solvers.config import SolverConfig
from sparse_mkr.solvers.ridge import solve_ridge

logger = logging.getLogger(__name__)

DEFAULT_PENALTY = 1e-3


@dataclass(frozen=True, eq=False)
class MklResult:
    mu: np.ndarray
    coeffs: np.ndarray
    objective: float
    inner_iterations: int
    converged: bool = True
    objective_trace: np.ndarray | None = None

    def raise_for_status(self) -> 'MklResult':
        if not self.converged:
            raise NotConverged(f"MKL stopped after {self.inner_iterations} alternations", result=self)
        return self


def combined_gram(grams: list[np.ndarray], mu) -> np.ndarray:
    return np.tensordot(np.asarray(mu, dtype=float), np.asarray(grams, dtype=float), axes=1)


def mkl_objective(grams, targets, lam: float, eta: float, mu, a) -> float:
    mu = np.asarray(mu, dtype=float)
    a = np.asarray(a, dtype=float)
    fitted = combined_gram(grams, mu) @ a
    return float(np.sum((fitted - targets) ** 2) + lam * a @ fitted + eta * mu @ mu)


def _weights_step(grams, targets, lam, eta, a) -> np.ndarray:
    basis = np.column_stack([g @ a for g in grams])
    curvature = np.array([a @ col for col in basis.T])
    quad = basis.T @ basis + eta * np.eye(len(grams))
    linear = basis.T @ targets - 0.5 * lam * curvature
    # complete the square: (mu - Q^-1 l)^T Q (mu - Q^-1 l) with Q = R^T R
    r = scipy.linalg.cholesky(quad)
    mu, _ = nnls(r, scipy.linalg.solve_triangular(r, linear, trans='T'))
    return mu


def _coefficient_step(gram, targets, lam) -> np.ndarray:
    try:
        return solve_ridge(gram, targets, lam)
    except SingularSystem:
        return scipy.linalg.lstsq(gram, targets)[0]


def solve_mkl(
    grams,
    targets,
    lam: float,
    mkl_penalty_weight: float = DEFAULT_PENALTY,
    config: SolverConfig | None = None,
) -> MklResult:
    """Alternate ridge solves for a and non-negative weight updates for mu."""
    grams = [np.asarray(g, dtype=float) for g in grams]
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if not grams:
        raise InvalidConfig("solve_mkl needs at least one Gram matrix")
    m = targets.shape[0]
    if any(g.shape != (m, m) for g in grams):
        raise InvalidConfig(f"every Gram matrix must be {m} x {m}")
    if mkl_penalty_weight <= 0:
        raise InvalidConfig(f"mkl_penalty_weight must be positive, got {mkl_penalty_weight!r}")
    config = config or SolverConfig(lam=lam)
    eta = float(mkl_penalty_weight)

    mu = np.full(len(grams), 1.0 / len(grams))
    a = _coefficient_step(combined_gram(grams, mu), targets, lam)
    current = mkl_objective(grams, targets, lam, eta, mu, a)
    best = (current, mu, a)
    trace = [current]
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iters + 1):
        mu = _weights_step(grams, targets, lam, eta, a)
        a = _coefficient_step(combined_gram(grams, mu), targets, lam)
        new = mkl_objective(grams, targets, lam, eta, mu, a)
        trace.append(new)
        if new < best[0]:
            best = (new, mu, a)
        change = abs(current - new) / max(abs(new), np.finfo(float).tiny)
        current = new
        logger.debug("mkl alternation %d: objective %.17g, mu %s", iteration, new, mu)
        if change < config.tol_rel_obj:
            converged = True
            break

    if not converged:
        logger.warning("MKL did not settle within %d alternations", iteration)
    objective, mu, a = best
    return MklResult(
        mu=mu,
        coeffs=a,
        objective=objective,
        inner_iterations=iteration,
        converged=converged,
        objective_trace=np.asarray(trace),
    )
