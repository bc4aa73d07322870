from functools import lru_cache
from typing import Iterator

import numpy as np
from loguru import logger
from scipy.signal import windows as scipy_windows

from rocofbench.application.ports.exceptions.estimation import (
    EstimatorConfigError,
)
from rocofbench.application.ports.exceptions.signal import RecordTooShort
from rocofbench.domain.entities import EstimatorConfig, Waveform


@lru_cache(maxsize=16)
def hann(n: int) -> np.ndarray:
    """
    Periodic Hann taper, symmetric about sample n / 2.
    """
    taper = scipy_windows.hann(n, sym=False)
    taper.flags.writeable = False
    return taper


def hann_kernel(nu: float | np.ndarray, bins: np.ndarray, n: int) -> np.ndarray:
    """
    Hann-windowed DFT of a unit complex tone, phase referenced at n / 2.

    Parameters
    ----------
    nu : float or np.ndarray
        Tone frequency in bins (f * n / fs), negative for images
    bins : np.ndarray
        DFT bin indices to evaluate
    n : int
        Window length

    Returns
    ----------
    np.ndarray
        sum_m w[m] exp(j 2 pi nu (m - n/2) / n) exp(-j 2 pi k m / n),
        shaped (len(nu), len(bins)) for array nu.
    """
    m = np.arange(n)
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    bins = np.atleast_1d(np.asarray(bins, dtype=float))
    tone = np.exp(2j * np.pi * nu[:, None] * (m[None, :] - n / 2) / n)
    basis = np.exp(-2j * np.pi * np.outer(m, bins) / n)
    return (tone * hann(n)[None, :]) @ basis


def validate_config(cfg: EstimatorConfig) -> None:
    """
    Check that the window and the reporting period fit the sample grid.

    Raises
    ----------
    EstimatorConfigError
        If window length or hop are not positive whole sample counts.
    """
    window = cfg.window_cycles / cfg.f_nominal * cfg.fs
    hop = cfg.fs / cfg.reporting_rate
    if cfg.window_cycles < 1 or abs(window - round(window)) > 1e-9:
        message = (
            f"{cfg.window_cycles}-cycle window is not a whole number "
            f"of samples at {cfg.fs} Hz."
        )
        logger.error(message)
        raise EstimatorConfigError(message)
    if hop < 1 or abs(hop - round(hop)) > 1e-9:
        message = (
            f"Reporting rate {cfg.reporting_rate} fps does not divide "
            f"the {cfg.fs} Hz sample grid."
        )
        logger.error(message)
        raise EstimatorConfigError(message)


def window_count(n_samples: int, cfg: EstimatorConfig) -> int:
    if n_samples < cfg.window_length:
        return 0
    return (n_samples - cfg.window_length) // cfg.hop + 1


def windows(
        w: Waveform,
        cfg: EstimatorConfig
) -> Iterator[tuple[float, np.ndarray]]:
    """
    Slide the observation window over a record at the reporting rate.

    Parameters
    ----------
    w : Waveform
        Record to segment
    cfg : EstimatorConfig
        Window length and reporting rate

    Returns
    ----------
    Iterator[tuple[float, np.ndarray]]
        (t_mid, samples) pairs; t_mid is the time of sample n / 2.

    Raises
    ----------
    RecordTooShort
        If the record is shorter than one window.
    """
    validate_config(cfg)
    n = cfg.window_length
    count = window_count(len(w), cfg)
    if count == 0:
        message = (
            f"Record of {len(w)} samples is shorter than "
            f"the {n}-sample window."
        )
        logger.error(message)
        raise RecordTooShort(message)
    views = np.lib.stride_tricks.sliding_window_view(w.samples, n)[::cfg.hop]
    logger.debug(f"Segmenting record into {count} windows of {n} samples")
    return _segments(views, w.t0, w.fs, cfg.hop, count)


def _segments(
        views: np.ndarray,
        t0: float,
        fs: float,
        hop: int,
        count: int
) -> Iterator[tuple[float, np.ndarray]]:
    n = views.shape[1]
    for index in range(count):
        yield t0 + (index * hop + n / 2) / fs, views[index]
