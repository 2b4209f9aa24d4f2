"""
Shift-invariant kernel families k(x, y) = rho(x - y).

Three families are supported: exponential kernels exp(-gamma ||r||_alpha^alpha),
Bessel potentials G_s(gamma r) and affine-transformed kernels k(Ax, Ay). Each
family is an immutable dataclass that knows its spatial profile and the log of
its Fourier response under the convention

    hat f(w) = int f(x) exp(-i <w, x>) dx,  inverse with (2 pi)^-d.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from sparse_mkr.errors import InvalidSpec
from sparse_mkr.kernels import stable

logger = logging.getLogger(__name__)

# Relative tolerance on |det A| for transformed kernels
DET_TOLERANCE = 1e-12


class KernelSpec(ABC):
    """Common interface of the admissible kernel families."""

    dim: int

    @abstractmethod
    def profile(self, offsets: np.ndarray) -> np.ndarray:
        """Evaluate rho at an array of offsets with trailing axis of size dim."""

    @abstractmethod
    def log_spectrum(self, omega: np.ndarray) -> np.ndarray:
        """Natural log of the Fourier response at frequencies (..., dim)."""

    @abstractmethod
    def length_scale(self) -> float:
        """Distance over which the kernel decays by a factor of order e."""

    @abstractmethod
    def frequency_scale(self) -> float:
        """Frequency beyond which the spectrum enters its asymptotic regime."""

    def projected_spectrum(self, omega1: np.ndarray) -> np.ndarray:
        """Spectrum integrated over all but the first frequency axis, / (2 pi)^(d-1).

        Its 1-D inverse transform is the kernel profile along the first axis.
        """
        raise InvalidSpec(
            f"{type(self).__name__} kernels cannot be tabulated along an axis"
        )

    def matrix(self, points: np.ndarray, centers: np.ndarray) -> np.ndarray:
        """Kernel matrix [rho(points_i - centers_j)]."""
        offsets = points[:, None, :] - centers[None, :, :]
        return self.profile(offsets)

    def value_at_zero(self) -> float:
        return float(self.profile(np.zeros((1, self.dim)))[0])


def _check_dim(dim) -> int:
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 1:
        raise InvalidSpec(f"dim must be a positive integer, got {dim!r}")
    return int(dim)


def _check_positive(name: str, value) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise InvalidSpec(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class Exponential(KernelSpec):
    """Exponential kernel exp(-gamma * sum_i |r_i|^alpha).

    alpha = 2 (the Gaussian) is constructible so it can serve as a baseline,
    but it fails the admissibility check.
    """

    alpha: float
    gamma: float
    dim: int = 1

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 < alpha <= 2.0):
            raise InvalidSpec(f"alpha must lie in (0, 2], got {self.alpha!r}")
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'gamma', _check_positive('gamma', self.gamma))
        object.__setattr__(self, 'dim', _check_dim(self.dim))

    def profile(self, offsets):
        offsets = np.asarray(offsets, dtype=float)
        return np.exp(-self.gamma * np.sum(np.abs(offsets) ** self.alpha, axis=-1))

    def _log_spectrum_1d(self, w: np.ndarray) -> np.ndarray:
        if self.alpha == 1.0:
            return math.log(2.0 * self.gamma) - np.log(self.gamma ** 2 + w ** 2)
        if self.alpha == 2.0:
            return 0.5 * math.log(math.pi / self.gamma) - w ** 2 / (4.0 * self.gamma)
        # exp(-gamma |x|^alpha) is the unit kernel dilated by c = gamma^(-1/alpha)
        c = self.gamma ** (-1.0 / self.alpha)
        values = stable.unit_spectrum(self.alpha, np.abs(w) * c)
        with np.errstate(divide='ignore', invalid='ignore'):
            return math.log(c) + np.log(np.where(values > 0, values, 0.0))

    def log_spectrum(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.sum(self._log_spectrum_1d(omega), axis=-1)

    def projected_spectrum(self, omega1):
        # axes separate and rho_1(0) = 1, so the projection is the 1-D spectrum
        return np.exp(self._log_spectrum_1d(np.asarray(omega1, dtype=float)))

    def length_scale(self):
        return self.gamma ** (-1.0 / self.alpha)

    def frequency_scale(self):
        return 1.0 / self.length_scale()


def gaussian(gamma: float, dim: int = 1) -> Exponential:
    """Gaussian kernel exp(-gamma ||r||^2), i.e. the alpha = 2 endpoint."""
    return Exponential(alpha=2.0, gamma=gamma, dim=dim)


def _is_half_integer(nu: float) -> bool:
    twice = 2.0 * nu
    nearest = round(twice)
    return abs(twice - nearest) < 1e-12 and nearest % 2 == 1


def matern_profile(r: np.ndarray, s: float, dim: int) -> np.ndarray:
    """Bessel potential G_s at radii r (unit width), via the Matern form."""
    nu = 0.5 * (s - dim)
    scale = 2.0 ** (1.0 - 0.5 * s) / ((2.0 * math.pi) ** (0.5 * dim) * special.gamma(0.5 * s))
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    at_zero = r == 0
    out[at_zero] = scale * 2.0 ** (nu - 1.0) * special.gamma(nu)
    rr = r[~at_zero]
    out[~at_zero] = scale * rr ** nu * special.kve(nu, rr) * np.exp(-rr)
    return out


@dataclass(frozen=True)
class BesselPotential(KernelSpec):
    """Bessel potential G_s(gamma r), the Green's function of (I - Laplacian)^(s/2).

    Half-integer orders nu = (s - d) / 2 have an elementary Matern closed form;
    other orders are read from a cached Fourier table (d <= 2).
    """

    s: float
    gamma: float
    dim: int = 1
    extrapolate: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'dim', _check_dim(self.dim))
        s = float(self.s)
        if not math.isfinite(s) or s <= self.dim:
            raise InvalidSpec(f"s must exceed the dimension d={self.dim}, got {self.s!r}")
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'gamma', _check_positive('gamma', self.gamma))

    @property
    def order(self) -> float:
        return 0.5 * (self.s - self.dim)

    @property
    def has_closed_form(self) -> bool:
        return _is_half_integer(self.order)

    def profile(self, offsets):
        offsets = np.asarray(offsets, dtype=float)
        r = self.gamma * np.linalg.norm(offsets, axis=-1)
        if self.has_closed_form:
            return matern_profile(r, self.s, self.dim)
        from sparse_mkr.kernels.fourier import unit_bessel_table

        table = unit_bessel_table(self.s, self.dim)
        return table.evaluate(r, extrapolate=self.extrapolate)

    def log_spectrum(self, omega):
        omega = np.asarray(omega, dtype=float)
        w2 = np.sum((omega / self.gamma) ** 2, axis=-1)
        return -self.dim * math.log(self.gamma) - 0.5 * self.s * np.log1p(w2)

    def projected_spectrum(self, omega1):
        # int (a^2 + t^2)^(-s/2) dt = a^(1-s) sqrt(pi) Gamma((s-1)/2) / Gamma(s/2)
        omega1 = np.asarray(omega1, dtype=float)
        if self.dim == 1:
            return np.exp(self.log_spectrum(omega1[..., None]))
        if self.dim != 2:
            return super().projected_spectrum(omega1)
        a2 = 1.0 + (omega1 / self.gamma) ** 2
        beta = math.sqrt(math.pi) * special.gamma(0.5 * (self.s - 1.0)) / special.gamma(0.5 * self.s)
        return a2 ** (0.5 * (1.0 - self.s)) * beta / (2.0 * math.pi * self.gamma)

    def length_scale(self):
        return 1.0 / self.gamma

    def frequency_scale(self):
        return self.gamma


@dataclass(frozen=True)
class Transformed(KernelSpec):
    """Rotated/dilated kernel k(Ax, Ay) for an invertible mixing matrix A."""

    base: KernelSpec
    mix: tuple

    def __post_init__(self):
        if not isinstance(self.base, KernelSpec):
            raise InvalidSpec("base must be a KernelSpec")
        try:
            matrix = np.array(self.mix, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidSpec(f"mix must be a numeric matrix: {exc}") from exc
        d = self.base.dim
        if matrix.shape != (d, d):
            raise InvalidSpec(f"mix must be a {d}x{d} matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise InvalidSpec("mix must have finite entries")
        scale = np.max(np.abs(matrix)) ** d
        if scale == 0 or abs(np.linalg.det(matrix)) <= DET_TOLERANCE * scale:
            raise InvalidSpec("mix must be invertible")
        object.__setattr__(self, 'mix', tuple(tuple(row) for row in matrix.tolist()))

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def matrix_a(self) -> np.ndarray:
        return np.array(self.mix, dtype=float)

    def profile(self, offsets):
        offsets = np.asarray(offsets, dtype=float)
        return self.base.profile(offsets @ self.matrix_a.T)

    def matrix(self, points, centers):
        a = self.matrix_a
        return self.base.matrix(points @ a.T, centers @ a.T)

    def log_spectrum(self, omega):
        a = self.matrix_a
        omega = np.asarray(omega, dtype=float)
        # hat rho_T(w) = |det A|^-1 hat rho(A^-T w)
        return -math.log(abs(np.linalg.det(a))) + self.base.log_spectrum(omega @ np.linalg.inv(a))

    def length_scale(self):
        return self.base.length_scale() / np.linalg.svd(self.matrix_a, compute_uv=False)[-1]

    def frequency_scale(self):
        return self.base.frequency_scale() * np.linalg.svd(self.matrix_a, compute_uv=False)[0]


def _as_points(value, dim: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InvalidSpec(f"{name} must have {dim} coordinates per point, got shape {np.shape(value)}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSpec(f"{name} must be finite")
    return arr


def kernel_matrix(spec: KernelSpec, points, centers) -> np.ndarray:
    """Evaluate [k(x_i, z_j)] for point rows x_i and center rows z_j."""
    x = _as_points(points, spec.dim, 'points')
    z = _as_points(centers, spec.dim, 'centers')
    return spec.matrix(x, z)


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Evaluate k(x, y) = rho(x - y) for two single points."""
    x = _as_points(x, spec.dim, 'x')
    y = _as_points(y, spec.dim, 'y')
    if x.shape[0] != 1 or y.shape[0] != 1:
        raise InvalidSpec("eval_kernel expects single points; use kernel_matrix for batches")
    return float(spec.matrix(x, y)[0, 0])
