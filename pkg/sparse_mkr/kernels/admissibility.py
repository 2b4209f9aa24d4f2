"""
Numerical admissibility certificate for shift-invariant kernels.

A kernel qualifies as the Green's function of an admissible operator when it
decays at infinity and its Fourier response is non-vanishing and heavy-tailed
(decays at most polynomially). The three properties are probed on finite
radius and frequency ranges:

* decay: the largest |rho| on the outer radial shell is a small fraction of rho(0);
* non-vanishing: log hat rho is finite at 0 and along a log-spaced frequency sweep;
* heavy tail: the log-log slope of hat rho is bounded below and does not grow
  with log |w|. Gaussian responses have a log-slope -w^2 / (2 gamma) that
  diverges linearly in w and are rejected.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from sparse_mkr.errors import ProbeRangeInvalid
from sparse_mkr.kernels.families import BesselPotential, KernelSpec, Transformed
from sparse_mkr.kernels.fourier import response_resolution

logger = logging.getLogger(__name__)

N_ANGLES_2D = 16


def _check_range(name: str, value) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ProbeRangeInvalid(f"{name} must be a pair of numbers, got {value!r}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
        raise ProbeRangeInvalid(f"{name} must satisfy 0 < low < high, got ({lo}, {hi})")
    return lo, hi


@dataclass(frozen=True)
class ProbeConfig:
    radius_range: tuple[float, float]
    frequency_range: tuple[float, float]
    decay_fraction: float = 1e-3
    slope_cap: float = 40.0
    growth_tol: float = 1.0
    n_points: int = 48

    def __post_init__(self):
        object.__setattr__(self, 'radius_range', _check_range('radius_range', self.radius_range))
        object.__setattr__(self, 'frequency_range', _check_range('frequency_range', self.frequency_range))
        if not (0 < self.decay_fraction < 1):
            raise ProbeRangeInvalid(f"decay_fraction must lie in (0, 1), got {self.decay_fraction!r}")
        if not (self.slope_cap > 0 and self.growth_tol > 0):
            raise ProbeRangeInvalid("slope_cap and growth_tol must be positive")
        if self.n_points < 8:
            raise ProbeRangeInvalid(f"n_points must be at least 8, got {self.n_points!r}")


def default_probe(spec: KernelSpec) -> ProbeConfig:
    """Probe ranges scaled to the kernel's own width."""
    ls = spec.length_scale()
    fs = spec.frequency_scale()
    return ProbeConfig(radius_range=(ls, 100.0 * ls), frequency_range=(10.0 * fs, 1000.0 * fs))


@dataclass(frozen=True)
class AdmissibilityReport:
    decays_at_infinity: bool
    fourier_nonvanishing: bool
    fourier_heavy_tailed: bool
    diagnostics: list[tuple[str, float]] = field(default_factory=list)
    probe: ProbeConfig | None = None

    @property
    def admissible(self) -> bool:
        return self.decays_at_infinity and self.fourier_nonvanishing and self.fourier_heavy_tailed

    def format(self) -> str:
        def mark(flag):
            return 'pass' if flag else 'FAIL'

        lines = [
            f"decays_at_infinity    {mark(self.decays_at_infinity)}",
            f"fourier_nonvanishing  {mark(self.fourier_nonvanishing)}",
            f"fourier_heavy_tailed  {mark(self.fourier_heavy_tailed)}",
            f"admissible            {'yes' if self.admissible else 'no'}",
        ]
        lines += [f"  {name} = {value:.6g}" for name, value in self.diagnostics]
        return "\n".join(lines)


def _shell_directions(dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, N_ANGLES_2D, endpoint=False)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    axes = np.vstack([np.eye(dim), -np.eye(dim)])
    if dim <= 6:
        diagonals = np.array(list(itertools.product((1.0, -1.0), repeat=dim)))
    else:
        diagonals = np.vstack([np.ones(dim), -np.ones(dim)])
    return np.vstack([axes, diagonals / math.sqrt(dim)])


def _tail_directions(dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0]])
    return np.vstack([np.eye(dim), np.ones(dim) / math.sqrt(dim)])


def _extrapolating(spec: KernelSpec) -> KernelSpec:
    # the outer shell may lie beyond a Bessel table
    if isinstance(spec, BesselPotential):
        return replace(spec, extrapolate=True)
    if isinstance(spec, Transformed):
        return replace(spec, base=_extrapolating(spec.base))
    return spec


def check_admissibility(spec: KernelSpec, probe: ProbeConfig | None = None) -> AdmissibilityReport:
    """Run the decay, non-vanishing and heavy-tail tests on spec."""
    probe = probe or default_probe(spec)
    diagnostics: list[tuple[str, float]] = []

    # decay
    r_outer = probe.radius_range[1]
    shell_spec = _extrapolating(spec)
    peak = shell_spec.value_at_zero()
    shell = np.max(np.abs(shell_spec.profile(r_outer * _shell_directions(spec.dim))))
    decay_ratio = float(shell / peak) if peak > 0 else math.inf
    decays = decay_ratio < probe.decay_fraction
    diagnostics += [('decay_ratio', decay_ratio), ('decay_fraction', probe.decay_fraction)]

    # non-vanishing
    w_lo, w_hi = probe.frequency_range
    sweep = np.concatenate([[0.0], np.geomspace(w_lo / 100.0, w_hi, probe.n_points)])
    directions = _tail_directions(spec.dim)
    log_values = np.concatenate([spec.log_spectrum(sweep[:, None] * u) for u in directions])
    nonvanishing = bool(np.all(np.isfinite(log_values)))
    min_log = float(np.min(log_values)) if nonvanishing else -math.inf
    diagnostics.append(('min_log_spectrum', min_log))

    # heavy tail
    log_w = np.log(np.geomspace(w_lo, w_hi, probe.n_points))
    worst_slope, worst_growth = math.inf, -math.inf
    for u in directions:
        log_hat = spec.log_spectrum(np.exp(log_w)[:, None] * u)
        if not np.all(np.isfinite(log_hat)):
            worst_slope, worst_growth = -math.inf, math.inf
            break
        slope = np.polyfit(log_w, log_hat, 1)[0]
        local = np.gradient(log_hat, log_w)
        growth = np.polyfit(log_w, np.abs(local), 1)[0]
        worst_slope = min(worst_slope, float(slope))
        worst_growth = max(worst_growth, float(growth))
    heavy = worst_slope >= -probe.slope_cap and worst_growth <= probe.growth_tol
    diagnostics += [
        ('tail_slope', worst_slope),
        ('slope_cap', -probe.slope_cap),
        ('slope_growth', worst_growth),
        ('growth_tol', probe.growth_tol),
    ]

    resolution = response_resolution(spec, w_hi)
    if resolution is not None:
        diagnostics += [
            ('spectrum_sample_spacing', resolution['sample_spacing']),
            ('spectrum_n_samples', float(resolution['n_samples'])),
        ]

    report = AdmissibilityReport(
        decays_at_infinity=bool(decays),
        fourier_nonvanishing=nonvanishing,
        fourier_heavy_tailed=bool(heavy),
        diagnostics=diagnostics,
        probe=probe,
    )
    logger.info("Admissibility of %r: %s", spec, report.admissible)
    return report
