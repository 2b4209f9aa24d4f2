import math

import pytest

from sparse_mkr.errors import ProbeRangeInvalid
from sparse_mkr.kernels import (
    BesselPotential,
    Exponential,
    ProbeConfig,
    Transformed,
    check_admissibility,
    default_probe,
    gaussian,
)


class TestCheckAdmissibility:
    @pytest.mark.parametrize('alpha', [0.5, 1.0, 1.5, 1.99])
    def test_exponential_kernels_pass(self, alpha):
        report = check_admissibility(Exponential(alpha=alpha, gamma=1.0))
        assert report.admissible, report.format()

    def test_gaussian_fails_heavy_tail_only(self):
        report = check_admissibility(gaussian(1.0))
        assert not report.admissible
        assert report.decays_at_infinity
        assert report.fourier_nonvanishing
        assert not report.fourier_heavy_tailed

    def test_bessel_in_two_dimensions(self):
        assert check_admissibility(BesselPotential(s=3.0, gamma=1.0, dim=2)).admissible

    def test_table_backed_bessel(self):
        """The outer probe shell lies beyond the unit table and is extrapolated."""
        assert check_admissibility(BesselPotential(s=2.5, gamma=1.0)).admissible

    def test_transformed_kernel(self):
        spec = Transformed(Exponential(alpha=1.0, gamma=1.0, dim=2), ((2.0, 1.0), (0.0, 1.0)))
        assert check_admissibility(spec).admissible

    def test_short_radius_range_fails_decay(self, laplace):
        probe = ProbeConfig(radius_range=(0.5, 2.0), frequency_range=(10.0, 1000.0))
        report = check_admissibility(laplace, probe)
        assert not report.decays_at_infinity
        assert report.fourier_heavy_tailed

    def test_diagnostics(self, laplace):
        report = check_admissibility(laplace)
        diagnostics = dict(report.diagnostics)
        assert diagnostics['decay_ratio'] == pytest.approx(math.exp(-100.0), rel=1e-9)
        assert diagnostics['tail_slope'] == pytest.approx(-2.0, abs=0.01)
        assert 'spectrum_sample_spacing' not in diagnostics

    def test_numeric_spectrum_reports_resolution(self):
        diagnostics = dict(check_admissibility(Exponential(alpha=1.5, gamma=1.0)).diagnostics)
        assert diagnostics['spectrum_sample_spacing'] > 0
        assert diagnostics['spectrum_n_samples'] >= 64

    def test_format(self):
        text = check_admissibility(gaussian(1.0)).format()
        assert "fourier_heavy_tailed  FAIL" in text
        assert "admissible            no" in text


class TestProbeConfig:
    def test_default_probe_scales_with_width(self):
        probe = default_probe(Exponential(alpha=1.0, gamma=4.0))
        assert probe.radius_range == pytest.approx((0.25, 25.0))
        assert probe.frequency_range == pytest.approx((40.0, 4000.0))

    @pytest.mark.parametrize('radius_range', [(2.0, 1.0), (0.0, 1.0), (-1.0, 1.0), (1.0, math.inf)])
    def test_invalid_ranges(self, radius_range):
        with pytest.raises(ProbeRangeInvalid):
            ProbeConfig(radius_range=radius_range, frequency_range=(1.0, 10.0))

    def test_invalid_frequency_range(self):
        with pytest.raises(ProbeRangeInvalid):
            ProbeConfig(radius_range=(1.0, 10.0), frequency_range=(5.0, 5.0))

    def test_probe_range_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            ProbeConfig(radius_range=(1.0,), frequency_range=(1.0, 10.0))
