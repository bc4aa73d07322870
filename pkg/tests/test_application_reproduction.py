"""Tests for full-length reproductions of the recorded datasets."""

from pathlib import Path
from unittest.mock import Mock

import pytest

from rocofbench.application.ports.result_writer import ResultWriterPort
from rocofbench.application.services import scenarios
from rocofbench.application.use_cases.run_dataset import RunDatasetUseCase
from rocofbench.domain.enums import Algorithm, DatasetName, PerformanceClass
from tests.factories import RunConfigFactory

pytestmark = pytest.mark.slow


def _run(dataset):
    writer = Mock(spec=ResultWriterPort)
    for name in ("write_stream", "write_cdf", "write_reference", "write_rows",
                 "write_text", "write_waveform", "write_spectrogram"):
        getattr(writer, name).side_effect = lambda *args, **kwargs: Path("out.csv")
    cfg = RunConfigFactory(
        dataset=dataset,
        algorithms=tuple(Algorithm),
        classes=tuple(PerformanceClass),
    )
    bundle = RunDatasetUseCase(writer, Mock()).execute(cfg)
    return {combo.key: combo for combo in bundle.combos}


def _class_pairs(combos):
    for (algorithm, mode, performance_class), combo in combos.items():
        if performance_class is PerformanceClass.M:
            yield combo, combos[(algorithm, mode, PerformanceClass.P)]


@pytest.fixture(scope="module")
def inter_harmonic_combos():
    """Run every combination on the inter-harmonic record."""
    return _run(DatasetName.DATASET1)


@pytest.fixture(scope="module")
def oscillation_combos():
    """Run every combination on the oscillating-frequency record."""
    return _run(DatasetName.DATASET2)


@pytest.fixture(scope="module")
def islanding_combos():
    """Run every combination on the islanding record."""
    return _run(DatasetName.DATASET3)


class TestInterHarmonicRecord:
    """Tests for the inter-harmonic record."""

    def test_every_combination_runs(self, inter_harmonic_combos):
        """Test that the run covers the published combinations."""
        assert set(inter_harmonic_combos) == set(scenarios.PUBLISHED_DATASET1)

    def test_class_m_near_published(self, inter_harmonic_combos):
        """Test that class M 95th percentiles stay within twice the published ones."""
        for key, combo in inter_harmonic_combos.items():
            if key[2] is PerformanceClass.M:
                published = scenarios.PUBLISHED_DATASET1[key].p95
                assert combo.scored.stats.p95_abs <= 2 * published, key

    def test_longer_window_is_better(self, inter_harmonic_combos):
        """Test that class M never has a larger 95th percentile than class P."""
        for m, p in _class_pairs(inter_harmonic_combos):
            assert m.scored.stats.p95_abs <= p.scored.stats.p95_abs, m.key


class TestOscillationRecord:
    """Tests for the oscillating-frequency record."""

    @pytest.mark.parametrize("performance_class, limit", [
        (PerformanceClass.P, 0.4),
        (PerformanceClass.M, 0.2),
    ])
    def test_error_limits(self, oscillation_combos, performance_class, limit):
        """Test the 95th percentile limit of each class."""
        for key, combo in oscillation_combos.items():
            if key[2] is performance_class:
                assert combo.scored.stats.p95_abs <= limit, key

    def test_longer_window_is_better(self, oscillation_combos):
        """Test that class M never has a larger 95th percentile than class P."""
        for m, p in _class_pairs(oscillation_combos):
            assert m.scored.stats.p95_abs <= p.scored.stats.p95_abs, m.key


class TestIslandingRecord:
    """Tests for the islanding record."""

    def test_pre_islanding_nrmse(self, islanding_combos):
        """Test the class P nRMSE before the step against the published mean."""
        published = scenarios.PUBLISHED_NRMSE[("pre-islanding", PerformanceClass.P)].mean
        for key, combo in islanding_combos.items():
            if key[2] is PerformanceClass.P:
                mean = combo.segments["pre-islanding"].mean
                assert published / 4 <= mean <= published * 4, key
