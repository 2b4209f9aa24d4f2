"""
Training data, candidate-center grids and design matrices.

A Dictionary stacks one design block per kernel: block n holds
[k_n(x_m, z_{n,l})] for the data sites x_m and the centers z_{n,l} of grid n.
Columns are ordered block-major, then in grid order; build_grid orders
centers lexicographically by coordinates.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial.distance import pdist

from sparse_mkr.errors import InvalidConfig, InvalidData, TooManyCenters
from sparse_mkr.kernels import KernelSpec, kernel_matrix

logger = logging.getLogger(__name__)

MAX_CENTERS = 1_000_000
# Relative slack on lattice counts and box membership
GRID_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box [lower, upper] in d dimensions."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise InvalidConfig(f"box corners must be vectors of equal length, got {lower.shape} and {upper.shape}")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidConfig("box corners must be finite")
        if np.any(upper < lower):
            raise InvalidConfig(f"box is empty: lower={lower.tolist()} upper={upper.tolist()}")
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def interval(cls, low: float, high: float) -> 'Box':
        return cls(np.array([low]), np.array([high]))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def extent(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, points: np.ndarray) -> np.ndarray:
        slack = GRID_SLACK * max(1.0, float(np.max(self.extent)))
        return np.all((points >= self.lower - slack) & (points <= self.upper + slack), axis=-1)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """M distinct data sites (rows of an M x d matrix) with their targets."""

    sites: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        sites = np.asarray(self.sites, dtype=float)
        if sites.ndim == 1:
            sites = sites.reshape(-1, 1)
        targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if sites.ndim != 2 or sites.shape[0] < 1:
            raise InvalidData(f"sites must be a non-empty M x d matrix, got shape {sites.shape}")
        if targets.shape[0] != sites.shape[0]:
            raise InvalidData(f"{sites.shape[0]} sites but {targets.shape[0]} targets")
        if not (np.all(np.isfinite(sites)) and np.all(np.isfinite(targets))):
            raise InvalidData("sites and targets must be finite")
        if np.unique(sites, axis=0).shape[0] != sites.shape[0]:
            raise InvalidData("sites must be pairwise distinct")
        object.__setattr__(self, 'sites', sites)
        object.__setattr__(self, 'targets', targets)

    @property
    def size(self) -> int:
        return self.sites.shape[0]

    @property
    def dim(self) -> int:
        return self.sites.shape[1]

    def subset(self, rows) -> 'TrainingSet':
        return TrainingSet(self.sites[rows], self.targets[rows])


@dataclass(frozen=True, eq=False)
class CenterGrid:
    """Candidate centers of one kernel block.

    indices holds integer lattice coordinates relative to bounds.lower when
    the centers lie on the lattice spacing * Z^d, and is None otherwise.
    """

    centers: np.ndarray
    spacing: float
    bounds: Box
    indices: np.ndarray | None = None

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float)
        if centers.ndim != 2 or centers.shape[1] != self.bounds.dim:
            raise InvalidConfig(f"centers must be an n x {self.bounds.dim} matrix, got shape {centers.shape}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise InvalidConfig(f"spacing must be positive, got {self.spacing!r}")
        if not np.all(self.bounds.contains(centers)):
            raise InvalidConfig("centers must lie within the grid bounds")
        object.__setattr__(self, 'centers', centers)

    @property
    def size(self) -> int:
        return self.centers.shape[0]


def build_grid(bounds: Box, spacing: float, max_centers: int = MAX_CENTERS) -> CenterGrid:
    """Uniform lattice from bounds.lower with both endpoints included when they fall on it."""
    spacing = float(spacing)
    if not (spacing > 0 and math.isfinite(spacing)):
        raise InvalidConfig(f"spacing must be positive, got {spacing!r}")
    counts = np.floor(bounds.extent / spacing + GRID_SLACK).astype(int) + 1
    total = math.prod(int(c) for c in counts)
    if total > max_centers:
        raise TooManyCenters(f"grid of spacing {spacing:g} has {total} centers (cap {max_centers})")
    axes = [np.arange(c) for c in counts]
    mesh = np.meshgrid(*axes, indexing='ij')
    indices = np.column_stack([m.reshape(-1) for m in mesh])
    return grid_from_indices(bounds, spacing, indices)


def grid_from_indices(bounds: Box, spacing: float, indices: np.ndarray) -> CenterGrid:
    indices = np.asarray(indices, dtype=np.int64).reshape(-1, bounds.dim)
    centers = bounds.lower + spacing * indices
    return CenterGrid(centers=centers, spacing=float(spacing), bounds=bounds, indices=indices)


def centers_at(points, bounds: Box | None = None) -> CenterGrid:
    """Grid whose centers are the given points (e.g. the data sites)."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if bounds is None:
        bounds = Box(points.min(axis=0), points.max(axis=0))
    spacing = float(np.min(pdist(points))) if points.shape[0] > 1 else 1.0
    return CenterGrid(centers=points, spacing=spacing, bounds=bounds)


def default_bounds(train: TrainingSet, specs: list[KernelSpec], margin: float = 3.0) -> Box:
    """Bounding box of the sites expanded by margin x the widest kernel."""
    width = max(spec.length_scale() for spec in specs)
    return Box(train.sites.min(axis=0) - margin * width, train.sites.max(axis=0) + margin * width)


@dataclass(frozen=True, eq=False)
class DictionaryBlock:
    spec: KernelSpec
    grid: CenterGrid
    design: np.ndarray


@dataclass(frozen=True, eq=False)
class Dictionary:
    blocks: tuple[DictionaryBlock, ...]

    @cached_property
    def design(self) -> np.ndarray:
        return np.hstack([block.design for block in self.blocks])

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum([block.grid.size for block in self.blocks])])

    @property
    def n_columns(self) -> int:
        return int(self.offsets[-1])

    @cached_property
    def column_index(self) -> np.ndarray:
        """(n, l) pair of every flat column, as an array of shape (P, 2)."""
        pairs = [np.column_stack([np.full(b.grid.size, n), np.arange(b.grid.size)]) for n, b in enumerate(self.blocks)]
        return np.vstack(pairs).astype(int)

    def column_of(self, n: int, l: int) -> int:
        if not (0 <= n < len(self.blocks) and 0 <= l < self.blocks[n].grid.size):
            raise IndexError(f"no column ({n}, {l})")
        return int(self.offsets[n] + l)

    def split(self, coeffs: np.ndarray) -> list[np.ndarray]:
        coeffs = np.asarray(coeffs, dtype=float)
        return [coeffs[self.offsets[n]:self.offsets[n + 1]] for n in range(len(self.blocks))]

    def column_centers(self) -> np.ndarray:
        return np.vstack([block.grid.centers for block in self.blocks])

    def predict(self, coeffs, points) -> np.ndarray:
        """f(x) = sum_n sum_l a_{n,l} k_n(x, z_{n,l}) at the given points."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_columns,):
            raise InvalidConfig(f"expected {self.n_columns} coefficients, got shape {coeffs.shape}")
        out = None
        for block, a in zip(self.blocks, self.split(coeffs)):
            part = kernel_matrix(block.spec, points, block.grid.centers) @ a
            out = part if out is None else out + part
        return out


def assemble_design(specs: list[KernelSpec], grids: list[CenterGrid], train: TrainingSet) -> Dictionary:
    if not specs or len(specs) != len(grids):
        raise InvalidConfig(f"need one grid per kernel, got {len(specs)} kernels and {len(grids)} grids")
    blocks = tuple(
        DictionaryBlock(spec=spec, grid=grid, design=kernel_matrix(spec, train.sites, grid.centers))
        for spec, grid in zip(specs, grids)
    )
    dictionary = Dictionary(blocks)
    logger.debug("Assembled %d x %d design from %d blocks", train.size, dictionary.n_columns, len(blocks))
    return dictionary


def assemble_gram(spec: KernelSpec, train: TrainingSet) -> np.ndarray:
    """Gram matrix [k(x_m, x_n)] of the data sites."""
    return kernel_matrix(spec, train.sites, train.sites)
