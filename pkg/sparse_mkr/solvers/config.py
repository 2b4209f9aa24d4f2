from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from sparse_mkr.errors import NotConverged


class StepRule(str, Enum):
    FIXED = 'fixed_from_power_iteration'
    BACKTRACKING = 'backtracking'


class SolverConfig(BaseModel):
    """Regularization weight and stopping rules of the iterative solvers."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, allow_inf_nan=False, extra='forbid')

    lam: float = Field(0.0, ge=0.0, alias='lambda')
    max_iters: int = Field(20000, ge=1)
    tol_rel_obj: float = Field(1e-10, gt=0.0)
    tol_kkt: float = Field(1e-8, gt=0.0)
    step_rule: StepRule = StepRule.FIXED
    # Iterations between attempts to solve the stationarity equations on the current support
    polish_every: int = Field(25, ge=1)


@dataclass(frozen=True, eq=False)
class SolverResult:
    coeffs: np.ndarray
    objective_trace: np.ndarray
    kkt_residual: float
    active_set: list[tuple[int, int]]
    iterations: int
    converged: bool
    threshold: float = 0.0
    message: str = field(default='')

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1])

    def raise_for_status(self) -> 'SolverResult':
        if not self.converged:
            raise NotConverged(
                f"solver stopped after {self.iterations} iterations "
                f"(kkt residual {self.kkt_residual:.3g}){': ' + self.message if self.message else ''}",
                result=self,
            )
        return self
