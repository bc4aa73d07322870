"""Tests for waveform synthesis."""

import math

import numpy as np
import pytest

from rocofbench.application.ports.exceptions.signal import (
    InvalidSignalModel,
    RecordTooShort,
)
from rocofbench.application.services import scenarios
from rocofbench.application.services.wavegen import (
    add_noise,
    effective_ramp_rates,
    harmonics_for_thd,
    measure_quality,
    noise_generator,
    oscillation_phase,
    ramp_integral,
    ramp_offset,
    synth_multitone,
    synth_oscillation,
    synth_step,
    validate_oscillation,
    validate_tone_set,
)
from rocofbench.domain.entities import (
    OscillationModel,
    PhasorTriple,
    RampSegment,
    StepModel,
    ToneComponent,
    ToneSet,
)
from rocofbench.domain.enums import RampPhaseConvention
from tests.factories import WaveformFactory


def _ramp_model(convention=RampPhaseConvention.INTEGRAL, **overrides):
    parameters = dict(
        A=1.0, f=50.0, phi=0.0, k_A=0.0, f_A=0.1, k_phi=0.0, f_phi=0.1,
        segments=(
            RampSegment(0.0, 1.0, 0.0),
            RampSegment(1.0, 2.0, 0.5),
            RampSegment(2.0, 3.0, -0.25),
        ),
        phase_convention=convention,
    )
    parameters.update(overrides)
    return OscillationModel(**parameters)


class TestSynthMultitone:
    """Tests for synth_multitone."""

    def test_sample_count_and_peak(self):
        """Test record length and the in-phase first sample."""
        model = scenarios.dataset1_model(amplitude=2.0)

        w = synth_multitone(model, 5000.0, 0.2)

        assert len(w) == 1000
        assert w.fs == 5000.0
        expected = 2.0 * sum(c.norm_amplitude for c in model.components)
        assert w.samples[0] == pytest.approx(expected)

    def test_single_tone(self):
        """Test that a lone fundamental is a plain cosine."""
        model = ToneSet(50.0, 1.0, (ToneComponent(1.0, 1.0, 0.3),))

        w = synth_multitone(model, 5000.0, 0.1)

        t = np.arange(500) / 5000.0
        np.testing.assert_allclose(
            w.samples, np.cos(2 * np.pi * 50 * t + 0.3), atol=1e-12
        )

    @pytest.mark.parametrize("fs, duration", [(0.0, 1.0), (5000.0, -1.0), (5000.0, 0.00011)])
    def test_invalid_sampling(self, fs, duration):
        """Test non-positive rates and fractional sample counts."""
        model = ToneSet(50.0, 1.0, (ToneComponent(1.0, 1.0),))

        with pytest.raises(InvalidSignalModel):
            synth_multitone(model, fs, duration)

    @pytest.mark.parametrize("gain", [2.0, 3.7])
    def test_scale_equivariance(self, gain):
        """Test that the fundamental amplitude scales every sample."""
        unit = synth_multitone(scenarios.dataset1_model(), 5000.0, 0.5)
        scaled = synth_multitone(scenarios.dataset1_model(amplitude=gain), 5000.0, 0.5)

        np.testing.assert_allclose(scaled.samples, gain * unit.samples, rtol=1e-12, atol=1e-15)

    def test_inter_harmonic_record_quality(self):
        """Test the distortion figures of the noiseless inter-harmonic record."""
        w = synth_multitone(scenarios.dataset1_model(), 5000.0, scenarios.DATASET1_DURATION)

        quality = measure_quality(w, 50.0, (2, 6))

        assert quality.thd_pct == pytest.approx(11.17, abs=0.02)
        assert quality.sinad_db == pytest.approx(16.94, abs=0.01)


class TestValidateToneSet:
    """Tests for validate_tone_set."""

    @pytest.mark.parametrize("components", [
        (),
        (ToneComponent(2.0, 0.1), ToneComponent(1.0, 1.0)),
        (ToneComponent(1.0, 1.0), ToneComponent(1.0, 0.5)),
        (ToneComponent(1.0, 1.0), ToneComponent(2.0, -0.1)),
        (ToneComponent(-0.5, 0.1), ToneComponent(1.0, 1.0)),
        (ToneComponent(2.0, 0.1),),
    ])
    def test_invalid_models(self, components):
        """Test rejection of malformed tone sets."""
        with pytest.raises(InvalidSignalModel):
            validate_tone_set(ToneSet(50.0, 1.0, components))

    def test_default_dataset_model(self):
        """Test that the multi-tone scenario is valid."""
        model = scenarios.dataset1_model()

        validate_tone_set(model)
        assert len(model.components) == 14


class TestOscillation:
    """Tests for the oscillation model helpers."""

    def test_offset_is_continuous(self):
        """Test that r(t) has no jump at segment boundaries."""
        model = _ramp_model()

        before = ramp_offset(model, np.array([2.0 - 1e-9]))
        after = ramp_offset(model, np.array([2.0]))

        assert after[0] == pytest.approx(0.5, abs=1e-6)
        assert before[0] == pytest.approx(after[0], abs=1e-6)
        assert ramp_offset(model, np.array([2.5]))[0] == pytest.approx(0.375)

    def test_integral_matches_offset(self):
        """Test that the ramp integral differentiates to the offset."""
        model = _ramp_model()
        t = np.array([0.5, 1.3, 2.7])
        h = 1e-5

        derivative = (ramp_integral(model, t + h) - ramp_integral(model, t - h)) / (2 * h)

        np.testing.assert_allclose(derivative, ramp_offset(model, t), atol=1e-6)

    def test_literal_convention_rates(self):
        """Test that the literal reading divides slopes by pi."""
        model = _ramp_model(RampPhaseConvention.LITERAL)

        np.testing.assert_allclose(
            effective_ramp_rates(model), np.array([0.0, 0.5, -0.25]) / np.pi
        )

    def test_synth_first_sample(self):
        """Test the first sample against the closed form."""
        model = _ramp_model(A=2.0, phi=0.4, k_A=0.1, k_phi=0.05)

        w = synth_oscillation(model, 1000.0)

        assert len(w) == 3000
        assert w.samples[0] == pytest.approx(2.0 * 1.1 * math.cos(0.45))

    def test_synth_follows_phase(self):
        """Test samples against the model phase."""
        model = scenarios.dataset2_model()
        w = synth_oscillation(model, 5000.0)

        index = np.array([0, 150_000, 500_000, 1_000_000])
        t = index / 5000.0
        envelope = model.A * (1 + model.k_A * np.cos(2 * np.pi * model.f_A * t))

        assert len(w) == int(220.5 * 5000)
        np.testing.assert_allclose(
            w.samples[index], envelope * np.cos(oscillation_phase(model, t)),
            atol=1e-9,
        )

    @pytest.mark.parametrize("overrides", [
        {"segments": ()},
        {"k_A": 1.0},
        {"segments": (RampSegment(0.5, 1.0),)},
        {"segments": (RampSegment(0.0, 1.0), RampSegment(1.5, 2.0))},
        {"segments": (RampSegment(0.0, 1.0), RampSegment(0.5, 2.0))},
        {"segments": (RampSegment(0.0, 1.0), RampSegment(1.0, 1.0))},
    ])
    def test_invalid_schedule(self, overrides):
        """Test rejection of invalid schedules and modulation."""
        with pytest.raises(InvalidSignalModel):
            validate_oscillation(_ramp_model(**overrides))

    def test_sampling_rate_too_low(self):
        """Test the sampling rate check."""
        with pytest.raises(InvalidSignalModel):
            synth_oscillation(_ramp_model(), 100.0)


class TestStep:
    """Tests for harmonics_for_thd and synth_step."""

    def test_harmonics_share_power(self):
        """Test equal amplitudes reaching the target THD."""
        harmonics = harmonics_for_thd(5.0)

        assert [h.harm_index for h in harmonics] == [3.0, 5.0]
        assert harmonics[0].norm_amplitude == pytest.approx(0.05 / math.sqrt(2))
        total = math.sqrt(sum(h.norm_amplitude ** 2 for h in harmonics))
        assert total == pytest.approx(0.05)

    def test_negative_thd(self):
        """Test that a negative THD is rejected."""
        with pytest.raises(InvalidSignalModel):
            harmonics_for_thd(-1.0)

    def test_segments_follow_phasors(self):
        """Test samples on each side of the switch."""
        model = StepModel(
            pre=PhasorTriple(1.0, 50.0, 0.0),
            post=PhasorTriple(2.0, 50.0, 1.0),
            t_step=0.5,
        )

        w = synth_step(model, 5000.0, 1.0)

        assert w.samples[2499] == pytest.approx(math.cos(2 * np.pi * 50 * 2499 / 5000))
        assert w.samples[2500] == pytest.approx(2 * math.cos(2 * np.pi * 50 * 0.5 + 1.0))

    @pytest.mark.parametrize("t_step", [0.0, 1.0, 2.0])
    def test_step_outside_record(self, t_step):
        """Test that the step must fall inside the record."""
        model = StepModel(PhasorTriple(1, 50, 0), PhasorTriple(1, 50, 0), t_step)

        with pytest.raises(InvalidSignalModel):
            synth_step(model, 5000.0, 1.0)


class TestNoise:
    """Tests for noise_generator and add_noise."""

    def test_infinite_snr_copies(self):
        """Test that disabled noise returns an equal copy."""
        w = WaveformFactory()

        noisy = add_noise(w, math.inf, 7)

        assert noisy.samples is not w.samples
        np.testing.assert_array_equal(noisy.samples, w.samples)
        assert noisy.seed == 7

    @pytest.mark.parametrize("snr", [math.nan, -math.inf])
    def test_invalid_snr(self, snr):
        """Test that NaN and -inf are rejected."""
        with pytest.raises(InvalidSignalModel):
            add_noise(WaveformFactory(), snr, 0)

    def test_deterministic(self):
        """Test that the same seed reproduces the same record."""
        w = WaveformFactory()

        first = add_noise(w, 40.0, 3)
        second = add_noise(w, 40.0, 3)
        other = add_noise(w, 40.0, 4)

        np.testing.assert_array_equal(first.samples, second.samples)
        assert not np.array_equal(first.samples, other.samples)

    def test_substreams_differ(self):
        """Test that substreams of one seed are independent draws."""
        first = noise_generator(5).normal(size=10)
        second = noise_generator(5, substream=1).normal(size=10)

        assert not np.array_equal(first, second)

    def test_measured_snr(self):
        """Test that the measured SNR matches the requested one."""
        noisy = add_noise(WaveformFactory(duration=2.0), 40.0, 11)

        quality = measure_quality(noisy, 50.0)

        assert quality.snr_db == pytest.approx(40.0, abs=0.5)
        assert quality.sinad_db == pytest.approx(40.0, abs=0.5)

    @pytest.mark.parametrize("snr_db, seed", [(20.0, 1), (40.0, 2), (46.24, 3), (60.0, 4)])
    def test_noise_power_calibration(self, snr_db, seed):
        """Test the realised SNR of a long record."""
        clean = WaveformFactory(duration=20.0)

        noisy = add_noise(clean, snr_db, seed)

        realised = 10 * np.log10(
            np.mean(clean.samples ** 2) / np.var(noisy.samples - clean.samples)
        )
        assert len(clean) >= 100000
        assert realised == pytest.approx(snr_db, abs=0.2)


class TestMeasureQuality:
    """Tests for measure_quality."""

    def test_pure_tone(self):
        """Test that a clean tone has no residual."""
        quality = measure_quality(WaveformFactory(), 50.0)

        assert quality.is_distortion_free
        assert math.isinf(quality.snr_db)
        assert quality.thd_pct < 1e-6

    def test_thd(self):
        """Test THD of a record built for 5 %."""
        components = (ToneComponent(1.0, 1.0),) + harmonics_for_thd(5.0)
        w = synth_multitone(ToneSet(50.0, 1.0, components), 5000.0, 1.0)

        quality = measure_quality(w, 50.0)

        assert quality.thd_pct == pytest.approx(5.0, rel=1e-6)
        assert quality.sinad_db == pytest.approx(-20 * math.log10(0.05), rel=1e-6)
        assert math.isinf(quality.snr_db)

    def test_too_short(self):
        """Test a record shorter than one cycle."""
        with pytest.raises(RecordTooShort):
            measure_quality(WaveformFactory(duration=0.01), 50.0)

    def test_power_balance(self):
        """Test that fundamental, distortion and noise powers add up to the record power."""
        components = (
            (ToneComponent(1.0, 1.0),) + harmonics_for_thd(5.0) + (ToneComponent(1.5, 0.02),)
        )
        w = synth_multitone(ToneSet(50.0, 1.0, components), 5000.0, 1.0)

        quality = measure_quality(w, 50.0)

        total = float(np.mean(w.samples ** 2))
        assert 0.5 * (1 + 10 ** (-quality.sinad_db / 10)) == pytest.approx(total, rel=1e-6)
        assert 10 ** (-quality.snr_db / 10) + (quality.thd_pct / 100) ** 2 == pytest.approx(
            10 ** (-quality.sinad_db / 10), rel=1e-6
        )
        assert quality.snr_db == pytest.approx(-20 * math.log10(0.02), rel=1e-6)

    @pytest.mark.parametrize("samples", [np.zeros(5000), np.full(5000, 0.3)])
    def test_no_fundamental(self, samples):
        """Test that a record without fundamental energy is rejected."""
        with pytest.raises(InvalidSignalModel):
            measure_quality(WaveformFactory(samples=samples), 50.0)
