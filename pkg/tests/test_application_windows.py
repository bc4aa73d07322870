"""Tests for window segmentation."""

import numpy as np
import pytest

from rocofbench.application.ports.exceptions.estimation import (
    EstimatorConfigError,
)
from rocofbench.application.ports.exceptions.signal import RecordTooShort
from rocofbench.application.services.estimators.windows import (
    hann,
    hann_kernel,
    validate_config,
    window_count,
    windows,
)
from rocofbench.domain.enums import PerformanceClass
from tests.factories import EstimatorConfigFactory, WaveformFactory


class TestHann:
    """Tests for hann and hann_kernel."""

    def test_periodic_taper(self):
        """Test that the taper is periodic and peaks at n / 2."""
        taper = hann(300)

        assert taper[0] == 0.0
        assert taper[150] == pytest.approx(1.0)
        assert taper[1] == pytest.approx(taper[299])
        assert taper.sum() == pytest.approx(150.0)

    def test_kernel_on_bin(self):
        """Test the three non-zero bins of an on-bin tone."""
        kernel = hann_kernel(5.0, np.array([3, 4, 5, 6, 7]), 300)

        np.testing.assert_allclose(np.abs(kernel[0]), [0, 75, 150, 75, 0], atol=1e-9)

    def test_kernel_matches_fft(self):
        """Test the kernel against the FFT of a tapered complex tone."""
        n = 500
        nu = 5.37
        m = np.arange(n)
        tone = np.exp(2j * np.pi * nu * (m - n / 2) / n) * hann(n)

        np.testing.assert_allclose(
            hann_kernel(nu, np.arange(10), n)[0], np.fft.fft(tone)[:10], atol=1e-9
        )


class TestWindows:
    """Tests for validate_config and windows."""

    @pytest.mark.parametrize(
        "performance_class, count",
        [(PerformanceClass.P, 248), (PerformanceClass.M, 246)],
    )
    def test_window_count(self, performance_class, count):
        """Test the number of windows in a 5 s record."""
        cfg = EstimatorConfigFactory(window_cycles=performance_class.window_cycles)

        assert window_count(25000, cfg) == count
        assert len(list(windows(WaveformFactory(duration=5.0), cfg))) == count

    def test_midpoints(self):
        """Test midpoint timestamps on the reporting grid."""
        cfg = EstimatorConfigFactory(window_cycles=3)
        w = WaveformFactory(t0=10.0)

        segments = list(windows(w, cfg))

        assert len(segments) == 48
        assert segments[0][0] == pytest.approx(10.03)
        assert segments[1][0] - segments[0][0] == pytest.approx(0.02)
        assert len(segments[0][1]) == 300
        np.testing.assert_array_equal(segments[1][1], w.samples[100:400])

    def test_record_too_short(self):
        """Test that a short record is rejected before iteration starts."""
        w = WaveformFactory(duration=0.05)

        with pytest.raises(RecordTooShort):
            windows(w, EstimatorConfigFactory())

    def test_invalid_grid_raises_at_call(self):
        """Test that the configuration is checked when windows is called."""
        cfg = EstimatorConfigFactory(reporting_rate=30.0)

        with pytest.raises(EstimatorConfigError):
            windows(WaveformFactory(), cfg)

    @pytest.mark.parametrize("overrides", [
        {"reporting_rate": 30.0},
        {"window_cycles": 0},
        {"fs": 4999.0},
    ])
    def test_invalid_grid(self, overrides):
        """Test windows and hops that do not fit the sample grid."""
        with pytest.raises(EstimatorConfigError):
            validate_config(EstimatorConfigFactory(**overrides))
