"""
Ground-truth frequency and ROCOF oracles.
"""
import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.metrics import MetricsInputError
from rocofbench.application.ports.exceptions.signal import (
    InvalidSignalModel,
    UndefinedPhase,
)
from rocofbench.application.services.wavegen import (
    effective_ramp_rates,
    ramp_offset,
    ramp_rate,
    validate_oscillation,
)
from rocofbench.domain.entities import (
    OscillationModel,
    ReferenceSeries,
    ToneSet,
)
from rocofbench.domain.enums import ReferenceSource

FUNDAMENTAL_BAND = (45.0, 55.0)
_ENVELOPE_FLOOR = 1e-9


def narrowband(model: ToneSet, band: tuple[float, float] = FUNDAMENTAL_BAND) -> ToneSet:
    """
    Restrict a tone set to the components inside the fundamental band.

    Parameters
    ----------
    model : ToneSet
        Full tone set
    band : tuple[float, float]
        Inclusive band edges in Hz

    Returns
    ----------
    ToneSet
        Tone set the estimators cannot resolve from the fundamental.
    """
    low, high = band
    components = tuple(
        component for component in model.components
        if low <= component.harm_index * model.system_freq <= high
    )
    return ToneSet(model.system_freq, model.fundamental_amplitude, components)


def _tone_arrays(model: ToneSet, band: tuple[float, float]):
    if model.fundamental is None:
        message = "Narrowband tone set must contain the fundamental."
        logger.error(message)
        raise InvalidSignalModel(message)
    low, high = band
    freqs = np.array([c.harm_index * model.system_freq for c in model.components])
    if np.any((freqs < low) | (freqs > high)):
        message = (
            f"Tone set holds components outside the fundamental band "
            f"{band}: {freqs[(freqs < low) | (freqs > high)]} Hz."
        )
        logger.error(message)
        raise InvalidSignalModel(message)
    amplitudes = np.array([
        c.norm_amplitude * model.fundamental_amplitude for c in model.components
    ])
    phases = np.array([c.phase for c in model.components])
    return freqs, amplitudes, phases


def _analytic_sum(freqs, amplitudes, phases, t, order: int = 0) -> np.ndarray:
    omega = 2 * np.pi * freqs
    terms = amplitudes[:, None] * np.exp(
        1j * (omega[:, None] * t[None, :] + phases[:, None])
    )
    return ((1j * omega[:, None]) ** order * terms).sum(axis=0)


def _check_envelope(z: np.ndarray, amplitudes: np.ndarray) -> None:
    if np.min(np.abs(z)) <= _ENVELOPE_FLOOR * amplitudes.sum():
        message = "Envelope of the narrowband sum passes through zero."
        logger.error(message)
        raise UndefinedPhase(message)


def instantaneous_frequency(
        narrowband_model: ToneSet,
        t_grid: np.ndarray,
        source: ReferenceSource = ReferenceSource.ANALYTIC,
        fs: float = 5000.0,
        band: tuple[float, float] = FUNDAMENTAL_BAND
) -> np.ndarray:
    """
    Instantaneous frequency of the narrowband analytic sum.

    Parameters
    ----------
    narrowband_model : ToneSet
        Fundamental plus in-band components only
    t_grid : np.ndarray
        Evaluation instants in seconds
    source : ReferenceSource
        ANALYTIC uses Re(z' conj z) / |z|^2, NUMERIC_DIFFERENTIATION a
        five-point stencil of the phase at step 1 / fs
    fs : float
        Native sampling rate setting the stencil step
    band : tuple[float, float]
        Fundamental band in Hz

    Returns
    ----------
    np.ndarray
        Frequency in Hz at each instant.

    Raises
    ----------
    InvalidSignalModel
        If the model holds out-of-band components or no fundamental.
    UndefinedPhase
        If the envelope vanishes on the grid.
    """
    return _frequency_and_rocof(narrowband_model, t_grid, source, fs, band)[0]


def instantaneous_rocof(
        narrowband_model: ToneSet,
        t_grid: np.ndarray,
        source: ReferenceSource = ReferenceSource.ANALYTIC,
        fs: float = 5000.0,
        band: tuple[float, float] = FUNDAMENTAL_BAND
) -> np.ndarray:
    """
    Time derivative of instantaneous_frequency in Hz/s.
    """
    return _frequency_and_rocof(narrowband_model, t_grid, source, fs, band)[1]


def _frequency_and_rocof(model, t_grid, source, fs, band):
    t = np.asarray(t_grid, dtype=float)
    freqs, amplitudes, phases = _tone_arrays(model, band)
    z = _analytic_sum(freqs, amplitudes, phases, t)
    _check_envelope(z, amplitudes)
    if source is ReferenceSource.ANALYTIC:
        dz = _analytic_sum(freqs, amplitudes, phases, t, order=1)
        d2z = _analytic_sum(freqs, amplitudes, phases, t, order=2)
        freq = np.imag(dz / z) / (2 * np.pi)
        rocof = np.imag((d2z * z - dz ** 2) / z ** 2) / (2 * np.pi)
        return freq, rocof
    h = 1.0 / fs
    # phase increments relative to the centre sample need no unwrapping
    shifted = {
        k: np.angle(_analytic_sum(freqs, amplitudes, phases, t + k * h) / z)
        for k in (-2, -1, 1, 2)
    }
    first = (
        -shifted[2] + 8 * shifted[1] - 8 * shifted[-1] + shifted[-2]
    ) / (12 * h)
    second = (
        -shifted[2] + 16 * shifted[1] + 16 * shifted[-1] - shifted[-2]
    ) / (12 * h ** 2)
    return first / (2 * np.pi), second / (2 * np.pi)


def rocof_reference(freq: np.ndarray, Tr: float) -> np.ndarray:
    """
    Incremental ratio between consecutive reference frequencies.

    Parameters
    ----------
    freq : np.ndarray
        Frequencies at reporting instants in Hz
    Tr : float
        Reporting period in seconds

    Returns
    ----------
    np.ndarray
        ROCOF in Hz/s; the first element is NaN (undefined).

    Raises
    ----------
    MetricsInputError
        If fewer than two points are given or Tr is not positive.
    """
    freq = np.asarray(freq, dtype=float)
    if len(freq) < 2:
        message = f"ROCOF reference needs at least 2 points, got {len(freq)}."
        logger.error(message)
        raise MetricsInputError(message)
    if Tr <= 0:
        message = f"Reporting period must be positive, got {Tr}."
        logger.error(message)
        raise MetricsInputError(message)
    rocof = np.empty_like(freq)
    rocof[0] = np.nan
    rocof[1:] = np.diff(freq) / Tr
    return rocof


def _fd_or_undefined(freq: np.ndarray, t: np.ndarray) -> np.ndarray:
    if len(t) < 2:
        return np.full(len(t), np.nan)
    steps = np.diff(t)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        return np.full(len(t), np.nan)
    return rocof_reference(freq, float(steps[0]))


def multitone_reference(
        model: ToneSet,
        t_grid: np.ndarray,
        source: ReferenceSource = ReferenceSource.ANALYTIC,
        fs: float = 5000.0,
        band: tuple[float, float] = FUNDAMENTAL_BAND
) -> ReferenceSeries:
    """
    Reference series of a multi-tone record from its in-band part.

    Parameters
    ----------
    model : ToneSet
        Full tone set; out-of-band components are disturbances
    t_grid : np.ndarray
        Reporting instants in seconds
    source : ReferenceSource
        Evaluation scheme for frequency and ROCOF
    fs : float
        Native sampling rate for the numeric scheme
    band : tuple[float, float]
        Fundamental band in Hz

    Returns
    ----------
    ReferenceSeries
        Frequency, instantaneous and incremental-ratio ROCOF.
    """
    t = np.asarray(t_grid, dtype=float)
    freq, rocof = _frequency_and_rocof(
        narrowband(model, band), t, source, fs, band
    )
    logger.debug(
        f"Multi-tone reference on {len(t)} instants, "
        f"ROCOF range [{rocof.min():.3f}, {rocof.max():.3f}] Hz/s"
    )
    return ReferenceSeries(
        t=t, freq=freq, rocof=rocof,
        rocof_fd=_fd_or_undefined(freq, t), source=source
    )


def oscillation_reference(
        model: OscillationModel,
        t_grid: np.ndarray
) -> ReferenceSeries:
    """
    Closed-form reference of the modulated, ramped carrier.

    Parameters
    ----------
    model : OscillationModel
        Carrier, modulation and ramp parameters
    t_grid : np.ndarray
        Reporting instants in seconds

    Returns
    ----------
    ReferenceSeries
        freq = f + r(t) - k_phi f_phi sin(2 pi f_phi t),
        rocof = R_f(t) - 2 pi k_phi f_phi^2 cos(2 pi f_phi t).
    """
    validate_oscillation(model)
    t = np.asarray(t_grid, dtype=float)
    freq = (
        model.f + ramp_offset(model, t)
        - model.k_phi * model.f_phi * np.sin(2 * np.pi * model.f_phi * t)
    )
    rocof = (
        ramp_rate(model, t)
        - 2 * np.pi * model.k_phi * model.f_phi ** 2
        * np.cos(2 * np.pi * model.f_phi * t)
    )
    logger.debug(
        f"Oscillation reference on {len(t)} instants, segment slopes "
        f"{effective_ramp_rates(model)} Hz/s"
    )
    return ReferenceSeries(
        t=t, freq=freq, rocof=rocof, rocof_fd=_fd_or_undefined(freq, t)
    )


def step_reference(
        t_grid: np.ndarray,
        pre_freq: float,
        post_freq: float,
        t_step: float
) -> ReferenceSeries:
    """
    Reference for a step record: nominal frequencies, ROCOF fixed at 0.
    """
    t = np.asarray(t_grid, dtype=float)
    freq = np.where(t < t_step, pre_freq, post_freq).astype(float)
    rocof_fd = np.zeros(len(t))
    if len(t):
        rocof_fd[0] = np.nan
    return ReferenceSeries(
        t=t, freq=freq, rocof=np.zeros(len(t)), rocof_fd=rocof_fd
    )
