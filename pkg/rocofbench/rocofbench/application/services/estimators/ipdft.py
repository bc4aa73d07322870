"""
Interpolated DFT estimators with Hann tapering.

Frequencies are handled in bins (nu = f * n / fs) and complex
amplitudes a = (A / 2) exp(j phi) are referenced to the window midpoint.
"""
from dataclasses import dataclass

import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.estimation import (
    ConvergenceFailed,
)
from rocofbench.application.services.estimators.windows import (
    hann,
    hann_kernel,
)
from rocofbench.domain.entities import EstimatorConfig, PhasorEstimate

_OSCILLATION_TOLERANCE = 1e-3


@dataclass(frozen=True)
class ToneFit:
    """
    Interpolated tone: frequency in bins, complex amplitude, peak bin.
    """
    nu: float
    a: complex
    k: int

    def freq(self, fs: float, n: int) -> float:
        return self.nu * fs / n

    @property
    def amplitude(self) -> float:
        return 2.0 * abs(self.a)

    @property
    def phase(self) -> float:
        return wrap_phase(float(np.angle(self.a)))


def wrap_phase(phi: float) -> float:
    """
    Wrap an angle to (-pi, pi].
    """
    return float(np.pi - (np.pi - phi) % (2 * np.pi))


def windowed_spectrum(samples: np.ndarray) -> np.ndarray:
    return np.fft.rfft(np.asarray(samples, dtype=float) * hann(len(samples)))


def tone_samples(fit: ToneFit, n: int) -> np.ndarray:
    """
    Time-domain real tone of a fit over an n-sample window.
    """
    m = np.arange(n)
    return 2.0 * np.real(fit.a * np.exp(2j * np.pi * fit.nu * (m - n / 2) / n))


def interpolation_delta(magnitudes: np.ndarray) -> float:
    """
    Three-point Hann interpolation.

    Parameters
    ----------
    magnitudes : np.ndarray
        |X[k-1]|, |X[k]|, |X[k+1]|

    Returns
    ----------
    float
        2 (|X[k+1]| - |X[k-1]|) / (|X[k-1]| + 2 |X[k]| + |X[k+1]|)
    """
    left, centre, right = magnitudes
    denominator = left + 2 * centre + right
    if denominator == 0:
        return 0.0
    return float(2 * (right - left) / denominator)


def _check_bin(k: int, spectrum_length: int) -> None:
    if k < 1 or k > spectrum_length - 2:
        message = f"Spectral peak at edge bin {k}, cannot interpolate."
        logger.warning(message)
        raise ConvergenceFailed(message)


def _band_bins(n: int, fs: float, f_nominal: float, length: int) -> tuple[int, int]:
    low = max(int(np.ceil(0.5 * f_nominal * n / fs)), 0)
    high = min(int(np.floor(1.5 * f_nominal * n / fs)), length - 1)
    return low, high


def _peak_fit(spectrum: np.ndarray, n: int, k: int) -> ToneFit:
    _check_bin(k, len(spectrum))
    delta = interpolation_delta(np.abs(spectrum[k - 1:k + 2]))
    nu = k + delta
    a = spectrum[k] / hann_kernel(nu, [k], n)[0, 0]
    return ToneFit(nu=nu, a=complex(a), k=k)


def locate_peak(spectrum: np.ndarray, n: int, fs: float, f_nominal: float) -> int:
    """
    Largest bin within half the nominal frequency of nominal.
    """
    low, high = _band_bins(n, fs, f_nominal, len(spectrum))
    if high < low:
        message = f"No DFT bin within the search band around {f_nominal} Hz."
        logger.warning(message)
        raise ConvergenceFailed(message)
    return low + int(np.argmax(np.abs(spectrum[low:high + 1])))


def ipdft_core(
        window: np.ndarray,
        fs: float,
        f_nominal: float
) -> tuple[float, float, float]:
    """
    Plain interpolated DFT of a Hann-tapered window.

    Parameters
    ----------
    window : np.ndarray
        Raw window samples (the taper is applied here)
    fs : float
        Sampling rate in Hz
    f_nominal : float
        Nominal frequency setting the peak search band

    Returns
    ----------
    tuple[float, float, float]
        Frequency in Hz, peak amplitude and phase at the window midpoint.

    Raises
    ----------
    ConvergenceFailed
        If the peak sits on the spectrum edge.
    """
    n = len(window)
    spectrum = windowed_spectrum(window)
    fit = _peak_fit(spectrum, n, locate_peak(spectrum, n, fs, f_nominal))
    return fit.freq(fs, n), fit.amplitude, fit.phase


def compensate_image(
        spectrum: np.ndarray,
        n: int,
        fit: ToneFit,
        iterations: int
) -> ToneFit:
    """
    Iteratively remove the negative-frequency image from the
    interpolation bins and re-interpolate.

    Parameters
    ----------
    spectrum : np.ndarray
        One-sided Hann-windowed spectrum
    n : int
        Window length
    fit : ToneFit
        Starting interpolation
    iterations : int
        Number of compensation passes

    Returns
    ----------
    ToneFit
        Compensated interpolation.

    Raises
    ----------
    ConvergenceFailed
        If the corrected fractional bin stays outside (-0.5, 0.5].
    """
    for _ in range(iterations):
        k = fit.k
        corrected = _without_image(spectrum, n, fit, k)
        delta = interpolation_delta(np.abs(corrected))
        if abs(delta) > 0.5:
            k = k + int(np.sign(delta))
            _check_bin(k, len(spectrum))
            corrected = _without_image(spectrum, n, fit, k)
            delta = interpolation_delta(np.abs(corrected))
            if abs(delta) > 0.5:
                message = (
                    f"Fractional bin {delta:.3f} left (-0.5, 0.5) "
                    f"after image compensation."
                )
                logger.warning(message)
                raise ConvergenceFailed(message)
        nu = k + delta
        a = corrected[1] / hann_kernel(nu, [k], n)[0, 0]
        fit = ToneFit(nu=nu, a=complex(a), k=k)
    return fit


def _without_image(spectrum, n, fit, k) -> np.ndarray:
    _check_bin(k, len(spectrum))
    bins = np.array([k - 1, k, k + 1])
    image = np.conj(fit.a) * hann_kernel(-fit.nu, bins, n)[0]
    return spectrum[bins] - image


def e_ipdft_fit(window: np.ndarray, cfg: EstimatorConfig) -> ToneFit:
    n = len(window)
    spectrum = windowed_spectrum(window)
    k = locate_peak(spectrum, n, cfg.fs, cfg.f_nominal)
    fit = _peak_fit(spectrum, n, k)
    return compensate_image(spectrum, n, fit, cfg.e_iterations)


def e_ipdft_estimate(
        window: np.ndarray,
        cfg: EstimatorConfig,
        t_mid: float = 0.0
) -> PhasorEstimate:
    """
    Interpolated DFT with negative-frequency image compensation.

    Parameters
    ----------
    window : np.ndarray
        Window samples
    cfg : EstimatorConfig
        Sampling rate, nominal frequency and iteration count
    t_mid : float
        Window midpoint timestamp

    Returns
    ----------
    PhasorEstimate
        Static-model estimate; rocof is left for the stream stage.

    Raises
    ----------
    ConvergenceFailed
        If interpolation fails.
    """
    fit = e_ipdft_fit(window, cfg)
    return _static_estimate(fit, cfg, len(window), t_mid)


def _static_estimate(fit, cfg, n, t_mid) -> PhasorEstimate:
    freq = fit.freq(cfg.fs, n)
    return PhasorEstimate(
        t_mid=t_mid,
        amplitude=fit.amplitude,
        phase=fit.phase,
        freq=freq,
        f_ref=freq,
    )


def _interferer_bins(
        spectrum_length: int,
        n: int,
        fit: ToneFit,
        cfg: EstimatorConfig
) -> np.ndarray:
    allowed = np.ones(spectrum_length, dtype=bool)
    allowed[[0, spectrum_length - 1]] = False
    allowed[max(fit.k - 1, 0):fit.k + 2] = False
    if cfg.interferer_outside_passband:
        freqs = np.arange(spectrum_length) * cfg.fs / n
        low, high = cfg.passband
        allowed &= (freqs < low) | (freqs > high)
    return np.flatnonzero(allowed)


def strongest_interferer(
        window: np.ndarray,
        fundamental: ToneFit,
        cfg: EstimatorConfig
) -> ToneFit | None:
    """
    Strongest tone left once the fundamental is removed.

    Parameters
    ----------
    window : np.ndarray
        Window samples
    fundamental : ToneFit
        Current fundamental interpolation
    cfg : EstimatorConfig
        Detection threshold and search restriction

    Returns
    ----------
    ToneFit or None
        Interferer with image compensation, None when its energy is
        below interferer_energy_ratio of the fundamental's.
    """
    n = len(window)
    residual = windowed_spectrum(window - tone_samples(fundamental, n))
    candidates = _interferer_bins(len(residual), n, fundamental, cfg)
    if candidates.size == 0:
        return None
    k = int(candidates[np.argmax(np.abs(residual[candidates]))])
    try:
        fit = compensate_image(residual, n, _peak_fit(residual, n, k), 1)
    except ConvergenceFailed:
        return None
    if abs(fit.a) ** 2 < cfg.interferer_energy_ratio * abs(fundamental.a) ** 2:
        return None
    return fit


def i_ipdft_estimate(
        window: np.ndarray,
        cfg: EstimatorConfig,
        t_mid: float = 0.0
) -> PhasorEstimate:
    """
    Interpolated DFT compensating the image and the strongest interferer.

    Alternates fundamental estimation on the interferer-free window
    with interferer estimation on the fundamental-free window.

    Parameters
    ----------
    window : np.ndarray
        Window samples
    cfg : EstimatorConfig
        Iteration limits and interferer detection threshold
    t_mid : float
        Window midpoint timestamp

    Returns
    ----------
    PhasorEstimate
        Static-model estimate of the fundamental.

    Raises
    ----------
    ConvergenceFailed
        If interpolation fails or the fundamental frequency oscillates
        between iterations.
    """
    n = len(window)
    fit = e_ipdft_fit(window, cfg)
    previous_change = np.inf
    for iteration in range(cfg.i_max_iterations):
        interferer = strongest_interferer(window, fit, cfg)
        if interferer is None:
            logger.debug(f"No interferer above threshold at iteration {iteration}")
            break
        refined = e_ipdft_fit(window - tone_samples(interferer, n), cfg)
        change = abs(refined.nu - fit.nu)
        fit = refined
        if change < 1e-9:
            break
        if change > previous_change and change > _OSCILLATION_TOLERANCE:
            message = (
                f"Fundamental estimate oscillates between iterations "
                f"(bin change {change:.2e})."
            )
            logger.warning(message)
            raise ConvergenceFailed(message)
        previous_change = change
    return _static_estimate(fit, cfg, n, t_mid)
