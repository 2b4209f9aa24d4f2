"""
Fourier responses and numerically inverted Green's function tables.

A table holds the kernel profile along the first coordinate axis on a uniform
offset grid. It is computed from the spectrum projected onto the first
frequency axis (for d = 2 the projection-slice identity turns the 2-D
inversion into a 1-D one) by a discrete inverse transform with a spatial
period of 8 x radius_max. The spectral tail above the Nyquist frequency is
not dropped: a power law is fitted to the last octave of samples and its
folded contribution is summed exactly with Hurwitz zeta values.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from sparse_mkr.errors import InvalidSpec, ResolutionTooCoarse, TableMissing
from sparse_mkr.kernels import stable
from sparse_mkr.kernels.families import BesselPotential, Exponential, KernelSpec, Transformed

logger = logging.getLogger(__name__)

FOURIER_CONVENTION = "hat f(w) = int f(x) exp(-i<w,x>) dx; inverse (2 pi)^-d int hat f(w) exp(i<w,x>) dw"

# Spatial period = PADDING x table diameter
PADDING = 4
ALIASING_TOLERANCE = 1e-6
DEFAULT_SAMPLES = 2 ** 14
UNIT_TABLE_RADIUS = 20.0
# Tail exponents above this are treated as negligible (super-polynomial decay)
MAX_TAIL_EXPONENT = 60.0


@dataclass(frozen=True, eq=False)
class GreensFunctionTable:
    """Kernel values on a symmetric uniform grid of offsets along the first axis.

    offsets has shape (n, dim); only its first column varies.
    """

    offsets: np.ndarray
    values: np.ndarray
    spacing: float
    aliasing_error: float
    convention: str = FOURIER_CONVENTION

    @property
    def radii(self) -> np.ndarray:
        return self.offsets[:, 0]

    @property
    def radius_max(self) -> float:
        return float(self.radii[-1])

    @property
    def peak(self) -> float:
        return float(np.max(self.values))

    @cached_property
    def _half(self) -> tuple[np.ndarray, np.ndarray]:
        keep = self.radii >= 0
        return self.radii[keep], self.values[keep]

    @cached_property
    def _spline(self) -> CubicSpline:
        r, v = self._half
        return CubicSpline(r, v)

    def evaluate(self, r, extrapolate: bool = False) -> np.ndarray:
        """Interpolate the profile at |r|."""
        r = np.abs(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        limit = self.radius_max * (1.0 + 1e-12)
        inside = r <= limit
        out[inside] = self._spline(np.minimum(r[inside], self.radius_max))
        if np.all(inside):
            return out
        if not extrapolate:
            raise TableMissing(
                f"offset {float(np.max(r)):.6g} lies beyond the tabulated radius {self.radius_max:.6g}; "
                "enable extrapolation or rebuild the table"
            )
        radii, values = self._half
        v1, v2 = values[-2], values[-1]
        if v1 > 0 and v2 > 0:
            slope = (math.log(v2) - math.log(v1)) / (radii[-1] - radii[-2])
            out[~inside] = np.exp(math.log(v2) + slope * (r[~inside] - radii[-1]))
        else:
            out[~inside] = 0.0
        return out


def fourier_response(spec: KernelSpec, omega):
    """Fourier response hat rho(omega) of a kernel.

    Closed form for Bessel potentials and exponential kernels with alpha in
    {1, 2}; other exponential kernels are approximate (see stable.py and
    response_resolution). A single frequency returns a float, an (n, d) batch
    returns an array.
    """
    arr = np.asarray(omega, dtype=float)
    single = arr.ndim == 0 or (arr.ndim == 1 and (spec.dim == 1 or arr.shape[0] == spec.dim))
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if spec.dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != spec.dim:
        raise InvalidSpec(f"omega must have {spec.dim} coordinates, got shape {np.shape(omega)}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSpec("omega must be finite")
    values = np.exp(spec.log_spectrum(arr))
    if single and values.size == 1:
        return float(values[0])
    return values


def _exponential_base(spec: KernelSpec) -> Exponential | None:
    while isinstance(spec, Transformed):
        spec = spec.base
    if isinstance(spec, Exponential) and spec.alpha not in (1.0, 2.0):
        return spec
    return None


def response_resolution(spec: KernelSpec, omega_max: float) -> dict | None:
    """Sampling of the numerical spectrum used up to omega_max, or None for closed forms."""
    base = _exponential_base(spec)
    if base is None:
        return None
    scale = omega_max / spec.frequency_scale() * base.frequency_scale()
    grid = stable.grid_for(base.alpha, scale * base.length_scale())
    return {
        'sample_spacing': grid.spacing,
        'n_samples': grid.n_samples,
        'omega_max': grid.omega_max / base.length_scale(),
    }


def _folded_tail(p: float, n: int) -> np.ndarray:
    """sum over k >= n/2 of (2k/n)^-p cos(2 pi k j / n), for j = 0..n-1."""
    # k = n/2 + m + n t folds onto m with a (-1)^j phase
    z = special.zeta(p, 0.5 + np.arange(n) / n)
    j = np.arange(n)
    return np.where(j % 2 == 0, 1.0, -1.0) * np.fft.fft(z).real * 2.0 ** -p


def fourier_greens_table(spec: KernelSpec, radius_max: float, n_samples: int = DEFAULT_SAMPLES) -> GreensFunctionTable:
    """Tabulate rho along the first axis on [-radius_max, radius_max].

    Raises ResolutionTooCoarse when the wrap-around and tail-model error
    estimate exceeds 1e-6 of the peak value.
    """
    n = int(n_samples)
    if n < 64 or n & (n - 1):
        raise InvalidSpec(f"n_samples must be a power of two >= 64, got {n_samples!r}")
    radius_max = float(radius_max)
    if not math.isfinite(radius_max) or radius_max <= 0:
        raise InvalidSpec(f"radius_max must be positive, got {radius_max!r}")
    if spec.dim > 2:
        raise InvalidSpec(f"Tables are limited to d <= 2, got d={spec.dim}")

    period = 2.0 * PADDING * radius_max
    dr = period / n
    dw = 2.0 * math.pi / period
    nyquist = math.pi / dr

    k = np.arange(n // 2 + 1)
    g = np.asarray(spec.projected_spectrum(k * dw), dtype=float)
    if not np.all(np.isfinite(g)):
        raise ResolutionTooCoarse("projected spectrum is not finite on the frequency grid")

    head = g.copy()
    head[-1] = 0.0
    profile = dw / (2.0 * math.pi) * n * np.fft.irfft(head, n)

    misfit = 0.0
    g_half, g_end = g[n // 4], g[n // 2]
    if g_end > 0 and g_half > 0:
        p = math.log(g_half / g_end) / math.log(2.0)
        if p <= 1.0:
            raise ResolutionTooCoarse(
                f"spectral tail decays like w^-{p:.3g}; the kernel is not continuous at 0"
            )
        if p <= MAX_TAIL_EXPONENT:
            c = g_end * nyquist ** p
            tail = dw / math.pi * c * nyquist ** -p * _folded_tail(p, n)
            profile += tail
            probe = g[3 * n // 8]
            model = c * (3 * n // 8 * dw) ** -p
            misfit = abs(model - probe) / probe * float(np.max(np.abs(tail)))
            logger.debug("Tail model w^-%.4f, correction %.3g", p, float(np.max(np.abs(tail))))

    x = (np.arange(n) - n // 2) * dr
    profile = np.fft.fftshift(profile)
    peak = float(np.max(np.abs(profile)))
    far = float(np.max(np.abs(profile[np.abs(x) >= 0.9 * period / 2])))
    error = (far + misfit) / peak
    if error > ALIASING_TOLERANCE:
        raise ResolutionTooCoarse(
            f"estimated aliasing error {error:.3g} of peak exceeds {ALIASING_TOLERANCE:g}; "
            "increase radius_max or n_samples"
        )

    keep = np.abs(x) <= radius_max * (1.0 + 1e-12)
    values = profile[keep]
    values = 0.5 * (values + values[::-1])
    offsets = np.zeros((values.size, spec.dim))
    offsets[:, 0] = x[keep]
    logger.debug("Table for %r: %d offsets, dr=%.3g, aliasing %.3g", spec, values.size, dr, error)
    return GreensFunctionTable(offsets=offsets, values=values, spacing=dr, aliasing_error=error)


@lru_cache(maxsize=32)
def unit_bessel_table(s: float, dim: int) -> GreensFunctionTable:
    """Cached table of G_s at unit width, shared by every BesselPotential(s, gamma, dim)."""
    return fourier_greens_table(BesselPotential(s=s, gamma=1.0, dim=dim), UNIT_TABLE_RADIUS, DEFAULT_SAMPLES)
