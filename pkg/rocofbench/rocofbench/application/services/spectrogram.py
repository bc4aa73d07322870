import numpy as np
from loguru import logger
from scipy import signal

from rocofbench.application.ports.exceptions.signal import RecordTooShort
from rocofbench.domain.entities import Waveform

DEFAULT_SEGMENT = 1024
DEFAULT_MAX_FREQUENCY = 500.0


def spectrogram(
        w: Waveform,
        segment: int = DEFAULT_SEGMENT,
        hop: int | None = None,
        max_frequency: float = DEFAULT_MAX_FREQUENCY
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Hann short-time Fourier transform magnitude of a record.

    Parameters
    ----------
    w : Waveform
        Record to analyse
    segment : int
        Samples per STFT segment
    hop : int or None
        Samples between segments, half a segment by default
    max_frequency : float
        Highest frequency kept in Hz

    Returns
    ----------
    tuple[np.ndarray, np.ndarray, np.ndarray]
        Frequencies, segment centre times (record time base) and
        magnitudes shaped (len(f), len(t)).

    Raises
    ----------
    RecordTooShort
        If the record is shorter than one segment.
    """
    if len(w) < segment:
        message = (
            f"Record of {len(w)} samples is shorter than "
            f"the {segment}-sample STFT segment."
        )
        logger.error(message)
        raise RecordTooShort(message)
    hop = hop or segment // 2
    f, t, z = signal.stft(
        w.samples, fs=w.fs, window="hann", nperseg=segment,
        noverlap=segment - hop, boundary=None, padded=False,
    )
    keep = f <= max_frequency
    logger.debug(f"Spectrogram of {len(t)} segments up to {max_frequency} Hz")
    return f[keep], t + w.t0, np.abs(z[keep])
