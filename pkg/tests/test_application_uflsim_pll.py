"""Tests for the phase-locked loop."""

import numpy as np
import pytest

from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.application.services.uflsim.pll import (
    PhaseLockedLoop,
    block_average,
    pll_track,
    validate_pll,
)
from rocofbench.domain.grid import PllConfig
from tests.factories import tone


class TestValidatePll:
    """Tests for validate_pll."""

    @pytest.mark.parametrize("overrides", [{"kp": 0.0}, {"ki": -1.0}, {"f0": 60.0}])
    def test_invalid(self, overrides):
        """Test gains and a quarter-cycle delay off the sample grid."""
        with pytest.raises(SimulationConfigError):
            validate_pll(PllConfig(**overrides))


class TestBlockAverage:
    """Tests for block_average."""

    def test_drops_partial_block(self):
        """Test means of whole blocks."""
        np.testing.assert_allclose(block_average(np.arange(1.0, 6.0), 2), [1.5, 3.5])


class TestPllTrack:
    """Tests for PhaseLockedLoop and pll_track."""

    def test_quarter_cycle_delay(self):
        """Test the delay line length at 5 kHz and 50 Hz."""
        assert PhaseLockedLoop(PllConfig()).delay == 25

    def test_locked_start(self):
        """Test that a matching start produces no transient."""
        track = pll_track(tone(50.0, phase=0.3), PllConfig(), initial_phase=0.3)

        np.testing.assert_allclose(track.freq, 50.0, atol=1e-6)
        assert not track.loss_of_lock
        assert track.lock_lost_at is None

    def test_frequency_step(self):
        """Test tracking of a phase-continuous step to 49.5 Hz."""
        fs = 5000.0
        t = np.arange(5000) / fs
        freq = np.where(t < 0.1, 50.0, 49.5)
        phase = 2 * np.pi * np.concatenate(([0.0], np.cumsum(freq[:-1]))) / fs

        track = pll_track(np.cos(phase), PllConfig(), reporting_rate=50.0)

        assert len(track.freq) == 50
        np.testing.assert_allclose(track.freq[:5], 50.0, atol=1e-6)
        np.testing.assert_allclose(track.freq[20:], 49.5, atol=0.01)

    def test_stateful_blocks(self):
        """Test that processing in blocks equals processing at once."""
        samples = tone(50.2, n=1000)
        whole = PhaseLockedLoop(PllConfig()).process(samples)
        loop = PhaseLockedLoop(PllConfig())

        split = np.concatenate((loop.process(samples[:300]), loop.process(samples[300:])))

        np.testing.assert_array_equal(whole, split)
