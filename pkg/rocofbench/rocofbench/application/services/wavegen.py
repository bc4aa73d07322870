"""
Test waveform synthesis, noise injection and quality figures.
"""
import math
from dataclasses import replace

import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.signal import (
    InvalidSignalModel,
    RecordTooShort,
)
from rocofbench.domain.entities import (
    OscillationModel,
    QualityReport,
    StepModel,
    ToneComponent,
    ToneSet,
    Waveform,
)
from rocofbench.domain.enums import RampPhaseConvention

NOISE_DISABLED = math.inf
DEFAULT_HARMONIC_SPAN = (2, 10)
_RESIDUAL_FLOOR = 1e-20


def _sample_count(fs: float, duration: float) -> int:
    if fs <= 0 or duration <= 0:
        message = (
            f"Sampling rate and duration must be positive, "
            f"got fs={fs}, duration={duration}."
        )
        logger.error(message)
        raise InvalidSignalModel(message)
    n = duration * fs
    if abs(n - round(n)) > 1e-6:
        message = f"duration * fs = {n} is not an integer sample count."
        logger.error(message)
        raise InvalidSignalModel(message)
    return int(round(n))


def validate_tone_set(model: ToneSet) -> None:
    """
    Check the multi-tone model.

    Parameters
    ----------
    model : ToneSet
        Model to check

    Raises
    ----------
    InvalidSignalModel
        If components are missing, unsorted, negative or the
        fundamental is absent or duplicated.
    """
    if not model.components:
        message = "Tone set has no components."
        logger.error(message)
        raise InvalidSignalModel(message)
    indices = [c.harm_index for c in model.components]
    if any(h <= 0 for h in indices):
        message = f"Harmonic indices must be positive, got {indices}."
        logger.error(message)
        raise InvalidSignalModel(message)
    if any(c.norm_amplitude < 0 for c in model.components):
        message = "Normalized amplitudes must be non-negative."
        logger.error(message)
        raise InvalidSignalModel(message)
    if indices != sorted(indices):
        message = f"Components must be sorted by harmonic index, got {indices}."
        logger.error(message)
        raise InvalidSignalModel(message)
    if indices.count(1) != 1:
        message = (
            f"Tone set needs exactly one fundamental, "
            f"found {indices.count(1)}."
        )
        logger.error(message)
        raise InvalidSignalModel(message)


def synth_multitone(model: ToneSet, fs: float, duration: float) -> Waveform:
    """
    Synthesize a noiseless multi-tone record.

    Parameters
    ----------
    model : ToneSet
        Tone components relative to the system frequency
    fs : float
        Sampling rate in Hz
    duration : float
        Record length in seconds

    Returns
    ----------
    Waveform
        Sum of A * a_k * cos(2 pi h_k f n / fs + theta_k).

    Raises
    ----------
    InvalidSignalModel
        If fs or duration are not positive or the model is invalid.
    """
    n = _sample_count(fs, duration)
    validate_tone_set(model)
    t = np.arange(n) / fs
    samples = np.zeros(n)
    for component in model.components:
        samples += component.norm_amplitude * np.cos(
            2 * np.pi * component.harm_index * model.system_freq * t
            + component.phase
        )
    samples *= model.fundamental_amplitude
    logger.debug(
        f"Synthesized {len(model.components)}-tone record, "
        f"{n} samples at {fs} Hz"
    )
    return Waveform(fs=fs, samples=samples, label="multitone")


def validate_oscillation(model: OscillationModel) -> None:
    """
    Check segment contiguity and modulation depth.

    Parameters
    ----------
    model : OscillationModel
        Model to check

    Raises
    ----------
    InvalidSignalModel
        If segments overlap, leave gaps or do not start at zero,
        or k_A is outside [0, 1).
    """
    if not model.segments:
        message = "Oscillation model has no ramp segments."
        logger.error(message)
        raise InvalidSignalModel(message)
    if not 0 <= model.k_A < 1:
        message = f"Amplitude modulation depth must be in [0, 1), got {model.k_A}."
        logger.error(message)
        raise InvalidSignalModel(message)
    if model.segments[0].t_start != 0:
        message = "First ramp segment must start at t = 0."
        logger.error(message)
        raise InvalidSignalModel(message)
    for previous, current in zip(model.segments, model.segments[1:]):
        if current.t_start < previous.t_stop:
            message = (
                f"Ramp segments overlap: [{previous.t_start}, "
                f"{previous.t_stop}] and [{current.t_start}, {current.t_stop}]."
            )
            logger.error(message)
            raise InvalidSignalModel(message)
        if current.t_start > previous.t_stop:
            message = (
                f"Ramp segments leave a gap between {previous.t_stop} "
                f"and {current.t_start}."
            )
            logger.error(message)
            raise InvalidSignalModel(message)
    for segment in model.segments:
        if segment.t_stop <= segment.t_start:
            message = f"Empty ramp segment {segment}."
            logger.error(message)
            raise InvalidSignalModel(message)


def effective_ramp_rates(model: OscillationModel) -> np.ndarray:
    """
    Return the frequency slope of each segment in Hz/s.

    Under the literal reading the segment phase term R_f * tau^2 is in
    radians, which is a frequency slope of R_f / pi.
    """
    rates = np.array([segment.rate for segment in model.segments])
    if model.phase_convention is RampPhaseConvention.LITERAL:
        return rates / np.pi
    return rates


def _segment_tables(model: OscillationModel):
    starts = np.array([segment.t_start for segment in model.segments])
    stops = np.array([segment.t_stop for segment in model.segments])
    rates = effective_ramp_rates(model)
    lengths = stops - starts
    # frequency offset and integrated offset at each segment start
    offsets = np.concatenate(([0.0], np.cumsum(rates * lengths)[:-1]))
    integrals = np.concatenate((
        [0.0],
        np.cumsum(offsets * lengths + 0.5 * rates * lengths ** 2)[:-1],
    ))
    return starts, rates, offsets, integrals


def _segment_index(starts: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.clip(np.searchsorted(starts, t, side="right") - 1, 0, None)


def ramp_offset(model: OscillationModel, t: np.ndarray) -> np.ndarray:
    """
    Continuous piecewise-linear frequency offset r(t) in Hz.
    """
    t = np.asarray(t, dtype=float)
    starts, rates, offsets, _ = _segment_tables(model)
    index = _segment_index(starts, t)
    return offsets[index] + rates[index] * (t - starts[index])


def ramp_rate(model: OscillationModel, t: np.ndarray) -> np.ndarray:
    """
    Slope of r(t) in Hz/s, taken from the segment containing t.
    """
    t = np.asarray(t, dtype=float)
    starts, rates, _, _ = _segment_tables(model)
    return rates[_segment_index(starts, t)]


def ramp_integral(model: OscillationModel, t: np.ndarray) -> np.ndarray:
    """
    Exact integral of r over [0, t] in Hz * s.
    """
    t = np.asarray(t, dtype=float)
    starts, rates, offsets, integrals = _segment_tables(model)
    index = _segment_index(starts, t)
    tau = t - starts[index]
    return integrals[index] + offsets[index] * tau + 0.5 * rates[index] * tau ** 2


def oscillation_phase(model: OscillationModel, t: np.ndarray) -> np.ndarray:
    """
    Total phase of the oscillation carrier in radians.

    Parameters
    ----------
    model : OscillationModel
        Carrier, modulation and ramp parameters
    t : np.ndarray
        Time instants in seconds

    Returns
    ----------
    np.ndarray
        2 pi f t + 2 pi int r + phi + k_phi cos(2 pi f_phi t)
    """
    t = np.asarray(t, dtype=float)
    return (
        2 * np.pi * model.f * t
        + 2 * np.pi * ramp_integral(model, t)
        + model.phi
        + model.k_phi * np.cos(2 * np.pi * model.f_phi * t)
    )


def synth_oscillation(model: OscillationModel, fs: float) -> Waveform:
    """
    Synthesize the modulated, ramped carrier over the segment schedule.

    Parameters
    ----------
    model : OscillationModel
        Carrier, modulation and ramp parameters
    fs : float
        Sampling rate in Hz

    Returns
    ----------
    Waveform
        Noiseless record covering [0, model.duration).

    Raises
    ----------
    InvalidSignalModel
        If the schedule is invalid or fs is not above 2 f.
    """
    validate_oscillation(model)
    if fs <= 2 * model.f:
        message = f"Sampling rate {fs} Hz must exceed twice {model.f} Hz."
        logger.error(message)
        raise InvalidSignalModel(message)
    n = _sample_count(fs, model.duration)
    t = np.arange(n) / fs
    envelope = model.A * (1 + model.k_A * np.cos(2 * np.pi * model.f_A * t))
    samples = envelope * np.cos(oscillation_phase(model, t))
    logger.debug(
        f"Synthesized oscillation record over {model.duration} s "
        f"with {len(model.segments)} ramp segments"
    )
    return Waveform(fs=fs, samples=samples, label="oscillation")


def harmonics_for_thd(
        thd_pct: float,
        harmonics: tuple[int, ...] = (3, 5)
) -> tuple[ToneComponent, ...]:
    """
    Equal-power harmonic add-ons reaching the target THD.

    Parameters
    ----------
    thd_pct : float
        Target THD in percent
    harmonics : tuple[int, ...]
        Harmonic orders sharing the distortion power

    Returns
    ----------
    tuple[ToneComponent, ...]
        One component per order, amplitude thd / sqrt(len(harmonics)).
    """
    if thd_pct < 0 or not harmonics:
        message = f"Cannot build distortion for THD {thd_pct}% on {harmonics}."
        logger.error(message)
        raise InvalidSignalModel(message)
    amplitude = thd_pct / 100 / math.sqrt(len(harmonics))
    return tuple(ToneComponent(float(h), amplitude) for h in harmonics)


def _steady_segment(
        amplitude: float,
        frequency: float,
        phase: float,
        distortion: tuple[ToneComponent, ...],
        t: np.ndarray
) -> np.ndarray:
    theta = 2 * np.pi * frequency * t + phase
    segment = np.cos(theta)
    for component in distortion:
        segment += component.norm_amplitude * np.cos(
            component.harm_index * theta + component.phase
        )
    return amplitude * segment


def synth_step(model: StepModel, fs: float, duration: float) -> Waveform:
    """
    Synthesize a record switching from the pre to the post phasor.

    Parameters
    ----------
    model : StepModel
        Pre and post phasors, step time and harmonic add-ons
    fs : float
        Sampling rate in Hz
    duration : float
        Record length in seconds

    Returns
    ----------
    Waveform
        Samples before the sample nearest t_step follow the pre phasor,
        the rest the post phasor.

    Raises
    ----------
    InvalidSignalModel
        If t_step is outside the record or a frequency is not positive.
    """
    n = _sample_count(fs, duration)
    if not 0 < model.t_step < duration:
        message = (
            f"Step time {model.t_step} s is outside the record "
            f"(0, {duration}) s."
        )
        logger.error(message)
        raise InvalidSignalModel(message)
    if model.pre.frequency <= 0 or model.post.frequency <= 0:
        message = "Pre and post frequencies must be positive."
        logger.error(message)
        raise InvalidSignalModel(message)
    switch = int(round(model.t_step * fs))
    t = np.arange(n) / fs
    samples = np.empty(n)
    samples[:switch] = _steady_segment(
        model.pre.amplitude, model.pre.frequency, model.pre.phase,
        model.distortion, t[:switch]
    )
    samples[switch:] = _steady_segment(
        model.post.amplitude, model.post.frequency, model.post.phase,
        model.distortion, t[switch:]
    )
    logger.debug(f"Synthesized step record, switch at sample {switch}")
    return Waveform(fs=fs, samples=samples, label="step")


def noise_generator(seed: int, substream: int = 0) -> np.random.Generator:
    """
    Counter-based generator; substreams are independent jumps of the seed.
    """
    bit_generator = np.random.Philox(seed)
    if substream:
        bit_generator = bit_generator.jumped(substream)
    return np.random.Generator(bit_generator)


def add_noise(w: Waveform, snr_db: float, seed: int) -> Waveform:
    """
    Add white Gaussian noise at the requested SNR.

    Parameters
    ----------
    w : Waveform
        Input record
    snr_db : float
        Signal-to-noise ratio in dB; NOISE_DISABLED returns the input samples
    seed : int
        Noise seed

    Returns
    ----------
    Waveform
        Record with noise variance = signal power / 10^(snr_db / 10).

    Raises
    ----------
    InvalidSignalModel
        If the record is empty or snr_db is NaN or -inf.
    """
    if len(w) == 0:
        message = "Cannot add noise to an empty record."
        logger.error(message)
        raise InvalidSignalModel(message)
    if math.isnan(snr_db) or snr_db == -math.inf:
        message = f"SNR must be finite or +inf, got {snr_db}."
        logger.error(message)
        raise InvalidSignalModel(message)
    if snr_db == NOISE_DISABLED:
        logger.debug("Noise disabled, record left untouched")
        return replace(w, samples=w.samples.copy(), seed=seed)
    power = float(np.mean(w.samples ** 2))
    sigma = math.sqrt(power / 10 ** (snr_db / 10))
    noise = noise_generator(seed).normal(0.0, sigma, len(w))
    logger.debug(f"Added noise at {snr_db} dB SNR, sigma={sigma:.3e}")
    return replace(w, samples=w.samples + noise, seed=seed)


def _bin_powers(samples: np.ndarray) -> np.ndarray:
    n = len(samples)
    spectrum = np.fft.rfft(samples)
    powers = np.abs(spectrum) ** 2 / n ** 2
    powers[1:] *= 2
    if n % 2 == 0:
        powers[-1] /= 2
    return powers


def _to_db(signal: float, residual: float) -> float:
    if residual <= signal * _RESIDUAL_FLOOR:
        return math.inf
    return 10 * math.log10(signal / residual)


def measure_quality(
        w: Waveform,
        f_sys: float,
        harmonic_span: tuple[int, int] = DEFAULT_HARMONIC_SPAN
) -> QualityReport:
    """
    Measure SNR, THD and SINAD on an integer number of cycles.

    Parameters
    ----------
    w : Waveform
        Record to analyse, trimmed to whole fundamental cycles
    f_sys : float
        Fundamental frequency in Hz
    harmonic_span : tuple[int, int]
        Inclusive harmonic orders counted in THD

    Returns
    ----------
    QualityReport
        SINAD and SNR are math.inf for residual-free records.

    Raises
    ----------
    RecordTooShort
        If the record holds less than one fundamental cycle.
    InvalidSignalModel
        If the record has no energy at the fundamental.
    """
    cycles = int(math.floor(len(w) * f_sys / w.fs + 1e-9))
    if cycles < 1:
        message = (
            f"Record of {len(w)} samples is shorter than one "
            f"{f_sys} Hz cycle."
        )
        logger.error(message)
        raise RecordTooShort(message)
    n = int(round(cycles * w.fs / f_sys))
    powers = _bin_powers(w.samples[:n])
    fundamental = powers[cycles]
    if not fundamental > _RESIDUAL_FLOOR * float(powers.sum()):
        message = f"Record has no energy at the {f_sys} Hz fundamental."
        logger.error(message)
        raise InvalidSignalModel(message)
    low, high = harmonic_span
    orders = [h for h in range(max(low, 2), high + 1) if h * cycles < len(powers)]
    harmonic = float(sum(powers[h * cycles] for h in orders))
    others = np.ones(len(powers), dtype=bool)
    others[cycles] = False
    residual = float(powers[others].sum())
    # DC and every harmonic bin are deterministic, the rest is noise
    others[0] = False
    others[2 * cycles::cycles] = False
    noise = float(powers[others].sum())
    report = QualityReport(
        snr_db=_to_db(fundamental, noise),
        thd_pct=100 * math.sqrt(harmonic / fundamental),
        sinad_db=_to_db(fundamental, residual),
        harmonic_span=(low, high),
    )
    logger.debug(f"Quality of {w.label or 'record'}: {report}")
    return report
