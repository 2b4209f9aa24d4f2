"""
Synthetic regression tasks: noisy samples of a piecewise-linear function.

All randomness comes from numpy's PCG64 bit generator seeded with the task
seed. Sites are drawn first (uniform on the domain, then sorted), followed by
the standard-normal noise draws, both from the same stream.
"""

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sparse_mkr.dictionary import TrainingSet

DEFAULT_KNOTS = (
    (-1.0, 0.0),
    (-0.6, 8.0),
    (-0.2, 2.0),
    (0.1, 10.0),
    (0.5, -4.0),
    (1.0, 3.0),
)
DEFAULT_NOISE = 2.0
DENSE_POINTS = 1000


class SyntheticTask(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra='forbid')

    knots: tuple[tuple[float, float], ...] = DEFAULT_KNOTS
    domain: tuple[float, float] = (-1.0, 1.0)
    n_samples: int = Field(40, ge=1)
    noise_sigma: float = Field(DEFAULT_NOISE, ge=0.0)
    seed: int = Field(0, ge=0, lt=2 ** 64)

    @field_validator('knots')
    @classmethod
    def _sorted_knots(cls, knots):
        if not knots:
            raise ValueError("at least one knot is required")
        positions = [x for x, _ in knots]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("knots must be sorted by strictly increasing position")
        return knots

    @model_validator(mode='after')
    def _check_domain(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError("domain must satisfy low < high")
        return self

    def target(self, x) -> np.ndarray:
        """Piecewise-linear interpolant of the knots, constant beyond the end knots."""
        positions, values = zip(*self.knots)
        return np.interp(np.asarray(x, dtype=float), positions, values)


@dataclass(frozen=True, eq=False)
class TaskSample:
    train: TrainingSet
    grid: np.ndarray
    truth: np.ndarray


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def generate_task(task: SyntheticTask) -> TaskSample:
    rng = make_generator(task.seed)
    lo, hi = task.domain
    sites = np.sort(rng.uniform(lo, hi, task.n_samples))
    noise = task.noise_sigma * rng.standard_normal(task.n_samples)
    train = TrainingSet(sites.reshape(-1, 1), task.target(sites) + noise)
    grid = np.linspace(lo, hi, DENSE_POINTS)
    return TaskSample(train=train, grid=grid, truth=task.target(grid))
