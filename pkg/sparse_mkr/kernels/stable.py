"""
Fourier response of the unit exponential kernel exp(-|x|^alpha) in one dimension.

Apart from alpha = 1 and alpha = 2 this response (2 pi times a symmetric
alpha-stable density) has no closed form. It is computed by an FFT of the
sampled kernel. The sampled transform equals the true transform plus its
periodic images (Poisson summation); the images lie far in the power-law tail

    hat rho(w) ~ 2 sum_k (-1)^(k+1) Gamma(k alpha + 1) / k! sin(k pi alpha / 2) |w|^(-k alpha - 1)

and are subtracted with Hurwitz zeta sums. Results are approximate: the
sample spacing and count are kept on the returned SpectrumGrid.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)

SAMPLE_CAP = 2 ** 22
TRUNCATION = 1e-14
OVERSAMPLE = 4
MIN_HALF_WIDTH = 64.0
SERIES_TERMS = 4
MIN_OMEGA_MAX = 64.0


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    """Sampled unit spectrum on a uniform frequency grid."""

    alpha: float
    spacing: float
    n_samples: int
    omega: np.ndarray
    values: np.ndarray

    @property
    def omega_max(self) -> float:
        return float(self.omega[-1])

    @cached_property
    def spline(self) -> CubicSpline:
        return CubicSpline(self.omega, self.values)


def tail_terms(alpha: float, terms: int = SERIES_TERMS) -> list[tuple[float, float]]:
    """(coefficient, decay exponent) pairs of the asymptotic spectrum."""
    out = []
    for k in range(1, terms + 1):
        coef = 2.0 * (-1) ** (k + 1) * special.gamma(k * alpha + 1.0) / math.factorial(k)
        coef *= math.sin(0.5 * k * math.pi * alpha)
        out.append((coef, k * alpha + 1.0))
    return out


def _images(alpha: float, omega: np.ndarray, period: float) -> np.ndarray:
    total = np.zeros_like(omega)
    for coef, power in tail_terms(alpha):
        if coef == 0.0:
            continue
        q = omega / period
        total += coef * period ** -power * (special.zeta(power, 1.0 + q) + special.zeta(power, 1.0 - q))
    return total


@lru_cache(maxsize=16)
def spectrum_grid(alpha: float, omega_max: float) -> SpectrumGrid:
    """FFT spectrum of exp(-|x|^alpha) valid on [0, omega_max]."""
    half_width = max(math.log(1.0 / TRUNCATION) ** (1.0 / alpha), MIN_HALF_WIDTH)
    dx = math.pi / (OVERSAMPLE * omega_max)
    n = 2 ** math.ceil(math.log2(2.0 * half_width / dx))
    if n > SAMPLE_CAP:
        n = SAMPLE_CAP
        dx = 2.0 * half_width / n
        logger.warning(
            "Spectrum of alpha=%s capped at %d samples; Nyquist frequency %.3g is "
            "below the requested %.3g x %d",
            alpha, n, math.pi / dx, omega_max, OVERSAMPLE,
        )
    j = np.arange(n)
    x = np.where(j < n // 2, j, j - n) * dx
    samples = np.exp(-np.abs(x) ** alpha)
    values = np.fft.rfft(samples).real * dx
    omega = 2.0 * math.pi * np.arange(n // 2 + 1) / (n * dx)
    keep = omega <= 1.25 * omega_max
    omega, values = omega[keep], values[keep]
    values -= _images(alpha, omega, 2.0 * math.pi / dx)
    logger.debug("alpha=%s spectrum: dx=%.3g, n=%d, %d kept frequencies", alpha, dx, n, omega.size)
    return SpectrumGrid(alpha=alpha, spacing=dx, n_samples=n, omega=omega, values=values)


def grid_for(alpha: float, w_max: float) -> SpectrumGrid:
    """Cached grid covering frequencies up to w_max (rounded up to a power of two)."""
    bucket = max(MIN_OMEGA_MAX, 2.0 ** math.ceil(math.log2(max(w_max, 1.0))))
    return spectrum_grid(float(alpha), bucket)


def unit_spectrum(alpha: float, w) -> np.ndarray:
    """Fourier response of exp(-|x|^alpha) at frequencies w."""
    w = np.abs(np.asarray(w, dtype=float))
    if w.size == 0:
        return np.zeros_like(w)
    grid = grid_for(alpha, float(np.max(w)))
    return grid.spline(w)
