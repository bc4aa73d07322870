"""Tests for domain entities."""

import math

import numpy as np
import pytest

from rocofbench.domain.entities import (
    EmpiricalCdf,
    EstimateStream,
    EstimatorConfig,
    QualityReport,
    ToneComponent,
    ToneSet,
    Waveform,
)
from rocofbench.domain.enums import (
    Algorithm,
    EstimateFlag,
    PerformanceClass,
)
from tests.factories import (
    EstimatorConfigFactory,
    PhasorEstimateFactory,
    ReferenceSeriesFactory,
)


class TestWaveform:
    """Tests for Waveform entity."""

    def test_time_axis_and_duration(self):
        """Test the time axis starts at t0 and steps by 1 / fs."""
        w = Waveform(fs=1000.0, samples=np.zeros(500), t0=2.0)

        assert len(w) == 500
        assert w.duration == 0.5
        assert w.t[0] == 2.0
        assert w.t[1] == pytest.approx(2.001)

    def test_defaults(self):
        """Test provenance defaults."""
        w = Waveform(fs=1000.0, samples=np.zeros(1))

        assert w.seed is None
        assert w.unit == "V"
        assert w.label == ""


class TestToneSet:
    """Tests for ToneSet entity."""

    def test_fundamental_lookup(self):
        """Test that the harm_index 1 component is the fundamental."""
        model = ToneSet(50.0, 1.0, (
            ToneComponent(0.9, 0.1), ToneComponent(1.0, 1.0, 0.2)
        ))

        assert model.fundamental == ToneComponent(1.0, 1.0, 0.2)

    def test_missing_fundamental(self):
        """Test that no fundamental gives None."""
        model = ToneSet(50.0, 1.0, (ToneComponent(2.0, 0.1),))

        assert model.fundamental is None


class TestEstimatorConfig:
    """Tests for EstimatorConfig entity."""

    @pytest.mark.parametrize(
        "performance_class, length",
        [(PerformanceClass.P, 300), (PerformanceClass.M, 500)],
    )
    def test_window_length(self, performance_class, length):
        """Test window lengths at 5 kHz and 50 Hz."""
        cfg = EstimatorConfigFactory(window_cycles=performance_class.window_cycles)

        assert cfg.window_length == length
        assert cfg.performance_class is performance_class

    def test_reporting_grid(self):
        """Test the hop and reporting period at 50 fps."""
        cfg = EstimatorConfig(algorithm=Algorithm.TFM)

        assert cfg.hop == 100
        assert cfg.reporting_period == pytest.approx(0.02)
        assert cfg.window_seconds == pytest.approx(0.1)

    def test_unknown_class(self):
        """Test that a non-standard window maps to no class."""
        cfg = EstimatorConfigFactory(window_cycles=4)

        assert cfg.performance_class is None

    def test_atom_limit(self):
        """Test the default room for every harmonic and interharmonic and an explicit budget."""
        cfg = EstimatorConfig(algorithm=Algorithm.TFM)

        assert cfg.max_atoms == 12
        assert cfg.condition_limit == 1e8
        assert EstimatorConfig(algorithm=Algorithm.TFM, atom_budget=4).max_atoms == 4
        assert EstimatorConfig(algorithm=Algorithm.TFM, harmonic_max=20).max_atoms == 22


class TestEstimateStream:
    """Tests for EstimateStream entity."""

    def test_columns_and_validity(self):
        """Test column extraction and the validity mask."""
        flagged = PhasorEstimateFactory(
            flags=frozenset({EstimateFlag.CONVERGENCE_FAILED}), freq=math.nan
        )
        stream = EstimateStream(
            config=EstimatorConfigFactory(),
            estimates=(PhasorEstimateFactory(freq=50.1), flagged),
        )

        assert len(stream) == 2
        assert stream.freq[0] == 50.1
        assert math.isnan(stream.freq[1])
        assert stream.valid.tolist() == [True, False]
        assert stream.t[1] > stream.t[0]


class TestEmpiricalCdf:
    """Tests for EmpiricalCdf entity."""

    @pytest.fixture
    def cdf(self):
        """Create a CDF over 1..20."""
        return EmpiricalCdf(values=np.arange(1.0, 21.0))

    def test_evaluate(self, cdf):
        """Test the right-continuous step function."""
        assert cdf.evaluate(0.5) == 0.0
        assert cdf.evaluate(1.0) == 0.05
        assert cdf.evaluate(20.0) == 1.0
        assert cdf.evaluate(np.array([10.0, 10.5])).tolist() == [0.5, 0.5]

    def test_quantile_order_statistic(self, cdf):
        """Test that the q-quantile is the ceil(q n)-th value."""
        assert cdf.quantile(0.95) == 19.0
        assert cdf.quantile(0.951) == 20.0
        assert cdf.quantile(0.0) == 1.0
        assert cdf.quantile(1.0) == 20.0


class TestReferenceAndQuality:
    """Tests for ReferenceSeries and QualityReport."""

    def test_rocof_fd_valid(self):
        """Test that the first incremental ratio is undefined."""
        reference = ReferenceSeriesFactory(count=4)

        assert len(reference) == 4
        assert reference.rocof_fd_valid.tolist() == [False, True, True, True]

    def test_distortion_free(self):
        """Test the infinite SINAD marker."""
        assert QualityReport(math.inf, 0.0, math.inf, (2, 10)).is_distortion_free
        assert not QualityReport(40.0, 1.0, 39.0, (2, 10)).is_distortion_free
