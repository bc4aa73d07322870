"""
Error metrics for ROCOF estimate streams and the nRMSE reliability index.
"""
import math

import numpy as np
from loguru import logger
from scipy import linalg, stats

from rocofbench.application.ports.exceptions.metrics import (
    MetricsInputError,
    ZeroEnergyWindow,
)
from rocofbench.domain.entities import (
    EmpiricalCdf,
    ErrorStats,
    EstimateStream,
    EstimatorConfig,
    NrmseReport,
    PhasorEstimate,
    ReferenceSeries,
    ScoredStream,
)
from rocofbench.domain.enums import RocofMode

PPM = 1e6


def _scored_pairs(est, ref, valid=None) -> tuple[np.ndarray, np.ndarray]:
    est = np.asarray(est, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if est.shape != ref.shape:
        message = (
            f"Estimate and reference lengths differ: "
            f"{len(est)} vs {len(ref)}."
        )
        logger.error(message)
        raise MetricsInputError(message)
    keep = np.isfinite(est) & np.isfinite(ref)
    if valid is not None:
        keep &= np.asarray(valid, dtype=bool)
    return est[keep], ref[keep]


def rfe_stats(
        est: np.ndarray,
        ref: np.ndarray,
        valid: np.ndarray | None = None
) -> ErrorStats:
    """
    Signed ROCOF error statistics.

    Parameters
    ----------
    est : np.ndarray
        Estimated ROCOF in Hz/s
    ref : np.ndarray
        Reference ROCOF aligned with est
    valid : np.ndarray or None
        Mask of unflagged samples; non-finite pairs are always dropped

    Returns
    ----------
    ErrorStats
        Mean and sample std of est - ref, 95th percentile of |est - ref|,
        Pearson correlation (None when either series is constant).

    Raises
    ----------
    MetricsInputError
        If lengths differ or fewer than two pairs remain.
    """
    est, ref = _scored_pairs(est, ref, valid)
    if len(est) < 2:
        message = f"At least 2 scored pairs are needed, got {len(est)}."
        logger.error(message)
        raise MetricsInputError(message)
    errors = est - ref
    pearson = None
    if np.ptp(est) > 0 and np.ptp(ref) > 0:
        pearson = float(stats.pearsonr(est, ref).statistic)
    return ErrorStats(
        mean=float(np.mean(errors)),
        std=float(np.std(errors, ddof=1)),
        p95_abs=empirical_cdf(errors).quantile(0.95),
        pearson=pearson,
        n=len(errors),
    )


def empirical_cdf(errors: np.ndarray) -> EmpiricalCdf:
    """
    Step CDF of error magnitudes.

    Raises
    ----------
    MetricsInputError
        If no finite error is given.
    """
    magnitudes = np.abs(np.asarray(errors, dtype=float))
    magnitudes = magnitudes[np.isfinite(magnitudes)]
    if magnitudes.size == 0:
        message = "Cannot build a CDF from an empty error sequence."
        logger.error(message)
        raise MetricsInputError(message)
    return EmpiricalCdf(values=np.sort(magnitudes))


def reconstruct(estimate: PhasorEstimate, n: int, fs: float) -> np.ndarray:
    """
    Fundamental waveform implied by an estimate over its window.

    Parameters
    ----------
    estimate : PhasorEstimate
        Static estimate (amplitude, phase, freq) or dynamic one
        carrying envelope coefficients around f_ref
    n : int
        Window length
    fs : float
        Sampling rate

    Returns
    ----------
    np.ndarray
        Reconstructed samples, time origin at the window midpoint.
    """
    t = (np.arange(n) - n / 2) / fs
    if estimate.envelope:
        envelope = np.polynomial.polynomial.polyval(t, np.array(estimate.envelope))
        return np.real(envelope * np.exp(2j * np.pi * estimate.f_ref * t))
    return estimate.amplitude * np.cos(
        2 * np.pi * estimate.freq * t + estimate.phase
    )


def remove_harmonics(
        residual: np.ndarray,
        freq: float,
        fs: float,
        harmonic_max: int
) -> np.ndarray:
    """
    Least-squares removal of static harmonics of freq, orders 2 to
    harmonic_max below Nyquist, time origin at the window midpoint.
    """
    orders = np.arange(2, harmonic_max + 1)
    orders = orders[orders * freq < fs / 2]
    if not np.isfinite(freq) or not len(orders):
        return residual
    n = len(residual)
    t = (np.arange(n) - n / 2) / fs
    phase = 2 * np.pi * np.outer(t, orders * freq)
    design = np.hstack((np.cos(phase), np.sin(phase)))
    coefficients, _, _, _ = linalg.lstsq(design, residual)
    return residual - design @ coefficients


def nrmse(
        window: np.ndarray,
        estimate: PhasorEstimate,
        cfg: EstimatorConfig
) -> float:
    """
    Residual energy of the reconstructed distorted fundamental over
    window energy.

    The fundamental comes from the estimate; harmonics of the estimated
    frequency up to cfg.harmonic_max are fitted to what remains, so the
    index measures model mismatch and noise rather than steady distortion.

    Parameters
    ----------
    window : np.ndarray
        Samples the estimate was computed from
    estimate : PhasorEstimate
        Estimate for this window
    cfg : EstimatorConfig
        Sampling rate and harmonic span

    Returns
    ----------
    float
        Energy ratio in ppm.

    Raises
    ----------
    ZeroEnergyWindow
        If the window is identically zero.
    """
    samples = np.asarray(window, dtype=float)
    energy = float(np.sum(samples ** 2))
    if energy == 0:
        message = f"Window at t_mid={estimate.t_mid:.4f} s has zero energy."
        logger.warning(message)
        raise ZeroEnergyWindow(message)
    residual = remove_harmonics(
        samples - reconstruct(estimate, len(samples), cfg.fs),
        estimate.freq, cfg.fs, cfg.harmonic_max,
    )
    return float(np.sum(residual ** 2) / energy * PPM)


def detect_transient(nrmse_stream: np.ndarray, threshold: float) -> np.ndarray:
    """
    Flag windows whose nRMSE exceeds the threshold.

    Parameters
    ----------
    nrmse_stream : np.ndarray
        Per-window nRMSE in ppm
    threshold : float
        Detection threshold in ppm, math.inf disables detection

    Returns
    ----------
    np.ndarray
        Boolean flags; NaN entries are never flagged.

    Raises
    ----------
    MetricsInputError
        If the threshold is not positive.
    """
    if not threshold > 0:
        message = f"Transient threshold must be positive, got {threshold}."
        logger.error(message)
        raise MetricsInputError(message)
    values = np.asarray(nrmse_stream, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.greater(values, threshold) & np.isfinite(values)


def summarise_nrmse(values: np.ndarray, label: str = "") -> NrmseReport:
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        message = f"No finite nRMSE values to summarise for {label or 'stream'}."
        logger.error(message)
        raise MetricsInputError(message)
    return NrmseReport(
        values=values,
        mean=float(np.mean(finite)),
        std=float(np.std(finite, ddof=1)) if finite.size > 1 else 0.0,
        max=float(np.max(finite)),
        label=label,
    )


def characterise_nrmse(
        nrmse_stream: np.ndarray,
        t: np.ndarray,
        segments: dict[str, tuple[float, float]],
        half_window: float = 0.0
) -> dict[str, NrmseReport]:
    """
    nRMSE distribution over labelled time segments.

    Parameters
    ----------
    nrmse_stream : np.ndarray
        Per-window nRMSE in ppm
    t : np.ndarray
        Window midpoints in seconds
    segments : dict[str, tuple[float, float]]
        Label to half-open interval [start, stop)
    half_window : float
        Half the window length in seconds; only windows whose whole
        span lies inside a segment are counted

    Returns
    ----------
    dict[str, NrmseReport]
        One report per segment.
    """
    nrmse_stream = np.asarray(nrmse_stream, dtype=float)
    t = np.asarray(t, dtype=float)
    reports = {}
    for label, (start, stop) in segments.items():
        inside = (t - half_window >= start) & (t + half_window <= stop) & (t < stop)
        reports[label] = summarise_nrmse(nrmse_stream[inside], label)
        logger.debug(
            f"nRMSE {label}: mean {reports[label].mean:.2f} ppm, "
            f"max {reports[label].max:.2f} ppm over {inside.sum()} windows"
        )
    return reports


def calibrate_threshold(report: NrmseReport, margin: float = 0.5) -> float:
    """
    Detection threshold from a steady-state characterisation.

    Returns
    ----------
    float
        report.max * (1 + margin) in ppm.
    """
    if margin < 0:
        message = f"Threshold margin must be non-negative, got {margin}."
        logger.error(message)
        raise MetricsInputError(message)
    return report.max * (1 + margin)


def reference_rocof(reference: ReferenceSeries, mode: RocofMode) -> np.ndarray:
    """
    Reference column matching a ROCOF formulation.
    """
    if mode is RocofMode.FINITE_DIFFERENCE:
        return reference.rocof_fd
    return reference.rocof


def score_stream(
        stream: EstimateStream,
        reference: ReferenceSeries,
        transient_threshold: float = math.inf
) -> ScoredStream:
    """
    Score an estimate stream against a reference on the same instants.

    Parameters
    ----------
    stream : EstimateStream
        Estimates with ROCOF filled in
    reference : ReferenceSeries
        Reference evaluated at stream.t
    transient_threshold : float
        nRMSE threshold in ppm for transient flags

    Returns
    ----------
    ScoredStream
        Signed errors, statistics, CDF and nRMSE summary.
    """
    ref = reference_rocof(reference, stream.config.rocof_mode)
    if len(ref) != len(stream):
        message = (
            f"Reference has {len(ref)} instants, stream has {len(stream)}."
        )
        logger.error(message)
        raise MetricsInputError(message)
    rocof = stream.rocof
    valid = stream.valid
    errors = np.where(valid, rocof - ref, np.nan)
    nrmse_values = stream.nrmse
    report = None
    flags = np.zeros(len(stream), dtype=bool)
    if np.isfinite(nrmse_values).any():
        report = summarise_nrmse(nrmse_values)
        flags = detect_transient(nrmse_values, transient_threshold)
    return ScoredStream(
        stream=stream,
        errors=errors,
        stats=rfe_stats(rocof, ref, valid),
        cdf=empirical_cdf(errors),
        nrmse=report,
        transient_flags=flags,
    )
