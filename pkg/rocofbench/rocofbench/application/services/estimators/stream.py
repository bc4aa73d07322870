from abc import ABC, abstractmethod
from dataclasses import replace

import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.estimation import (
    ConvergenceFailed,
    EstimatorConfigError,
)
from rocofbench.application.ports.exceptions.metrics import ZeroEnergyWindow
from rocofbench.application.services import metrics
from rocofbench.application.services.estimators.ipdft import (
    e_ipdft_estimate,
    i_ipdft_estimate,
)
from rocofbench.application.services.estimators.rocof import rocof_from_stream
from rocofbench.application.services.estimators.taylor_fourier import (
    tfm_estimate,
)
from rocofbench.application.services.estimators.windows import (
    validate_config,
    windows,
)
from rocofbench.domain.entities import (
    EstimateStream,
    EstimatorConfig,
    PhasorEstimate,
    Waveform,
)
from rocofbench.domain.enums import Algorithm, EstimateFlag, RocofMode


class PhasorEstimator(ABC):
    """
    Abstract base class for window-based phasor estimators.
    """
    algorithm: Algorithm
    dynamic: bool = False

    @abstractmethod
    def estimate(
            self,
            window: np.ndarray,
            cfg: EstimatorConfig,
            t_mid: float = 0.0
    ) -> PhasorEstimate:
        """
        Estimate the fundamental of one window.

        Parameters
        ----------
        window : np.ndarray
            Window samples
        cfg : EstimatorConfig
            Estimator configuration
        t_mid : float
            Window midpoint timestamp
        """
        ...


class EIpdftEstimator(PhasorEstimator):
    algorithm = Algorithm.E_IPDFT

    def estimate(self, window, cfg, t_mid=0.0) -> PhasorEstimate:
        return e_ipdft_estimate(window, cfg, t_mid)


class IIpdftEstimator(PhasorEstimator):
    algorithm = Algorithm.I_IPDFT

    def estimate(self, window, cfg, t_mid=0.0) -> PhasorEstimate:
        return i_ipdft_estimate(window, cfg, t_mid)


class TaylorFourierEstimator(PhasorEstimator):
    """
    Dynamic-model estimator; the only one offering derivative ROCOF.
    """
    algorithm = Algorithm.TFM
    dynamic = True

    def estimate(self, window, cfg, t_mid=0.0) -> PhasorEstimate:
        return tfm_estimate(window, cfg, t_mid)


def get_estimator(algorithm: Algorithm) -> PhasorEstimator:
    """
    Get estimator instance for an algorithm.

    Parameters
    ----------
    algorithm : Algorithm
        Requested algorithm

    Returns
    ----------
    PhasorEstimator
        Estimator instance

    Raises
    ----------
    EstimatorConfigError
        If the algorithm is not supported
    """
    estimators = {
        Algorithm.E_IPDFT: EIpdftEstimator(),
        Algorithm.I_IPDFT: IIpdftEstimator(),
        Algorithm.TFM: TaylorFourierEstimator(),
    }
    if algorithm not in estimators:
        message = f"Algorithm {algorithm} is not supported."
        logger.error(message)
        raise EstimatorConfigError(message)
    return estimators[algorithm]


def _failed(t_mid: float) -> PhasorEstimate:
    return PhasorEstimate(
        t_mid=t_mid, amplitude=np.nan, phase=np.nan, freq=np.nan,
        flags=frozenset({EstimateFlag.CONVERGENCE_FAILED}),
    )


def _with_nrmse(window, estimate, cfg) -> PhasorEstimate:
    try:
        value = metrics.nrmse(window, estimate, cfg)
    except ZeroEnergyWindow:
        value = np.nan
    return replace(estimate, nrmse_ppm=value)


def estimate_stream(
        w: Waveform,
        cfg: EstimatorConfig,
        with_nrmse: bool = True
) -> EstimateStream:
    """
    Run an estimator over a record at the reporting rate.

    Parameters
    ----------
    w : Waveform
        Record to analyse
    cfg : EstimatorConfig
        Algorithm, window class and ROCOF formulation
    with_nrmse : bool
        Fill nrmse_ppm for each window

    Returns
    ----------
    EstimateStream
        One estimate per window. Windows that fail to converge are
        flagged; the first estimate and any estimate after a failed
        window carry the undefined-ROCOF flag in finite-difference mode.

    Raises
    ----------
    EstimatorConfigError
        If derivative ROCOF is requested from a static estimator.
    RecordTooShort
        If the record is shorter than one window.
    """
    validate_config(cfg)
    estimator = get_estimator(cfg.algorithm)
    if cfg.rocof_mode is RocofMode.DERIVATIVE and not estimator.dynamic:
        message = (
            f"Derivative ROCOF needs a dynamic-model estimator, "
            f"{cfg.algorithm} is static."
        )
        logger.error(message)
        raise EstimatorConfigError(message)
    logger.info(
        f"Running {cfg.algorithm} class "
        f"{cfg.performance_class or cfg.window_cycles} "
        f"({cfg.rocof_mode}) on {w.label or 'record'}"
    )
    estimates = []
    failures = 0
    for t_mid, window in windows(w, cfg):
        try:
            estimate = estimator.estimate(window, cfg, t_mid)
        except ConvergenceFailed as error:
            logger.debug(f"Window at {t_mid:.4f} s flagged: {error}")
            failures += 1
            estimates.append(_failed(t_mid))
            continue
        if with_nrmse:
            estimate = _with_nrmse(window, estimate, cfg)
        estimates.append(estimate)
    if failures:
        logger.warning(
            f"{failures} of {len(estimates)} windows failed to converge"
        )
    return _attach_rocof(estimates, cfg)


def _attach_rocof(estimates: list[PhasorEstimate], cfg: EstimatorConfig) -> EstimateStream:
    freq = np.array([e.freq for e in estimates], dtype=float)
    derivative = None
    if cfg.rocof_mode is RocofMode.DERIVATIVE:
        derivative = np.array([e.rocof_instant for e in estimates], dtype=float)
    rocof = rocof_from_stream(freq, cfg.reporting_period, cfg.rocof_mode, derivative)
    attached = []
    for estimate, value in zip(estimates, rocof):
        flags = estimate.flags
        if np.isnan(value) and not flags:
            flags = flags | {EstimateFlag.FIRST_SAMPLE_ROCOF_UNDEFINED}
        attached.append(replace(estimate, rocof=float(value), flags=flags))
    return EstimateStream(config=cfg, estimates=tuple(attached))
