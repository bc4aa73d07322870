import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.estimation import (
    EstimatorConfigError,
)
from rocofbench.domain.enums import RocofMode


def rocof_from_stream(
        freq: np.ndarray,
        Tr: float,
        mode: RocofMode,
        derivative: np.ndarray | None = None
) -> np.ndarray:
    """
    ROCOF stream in either formulation.

    Parameters
    ----------
    freq : np.ndarray
        Frequency estimates in reporting order, Hz
    Tr : float
        Reporting period in seconds
    mode : RocofMode
        FINITE_DIFFERENCE takes the incremental ratio of consecutive
        frequencies; DERIVATIVE passes the per-window instantaneous
        ROCOF through
    derivative : np.ndarray or None
        Per-window instantaneous ROCOF of a dynamic-model estimator

    Returns
    ----------
    np.ndarray
        ROCOF in Hz/s. In finite-difference mode the first value is NaN
        and any value next to a NaN frequency is NaN.

    Raises
    ----------
    EstimatorConfigError
        If derivative mode has no derivative stream or lengths differ.
    """
    freq = np.asarray(freq, dtype=float)
    if mode is RocofMode.DERIVATIVE:
        if derivative is None:
            message = (
                "Derivative ROCOF requested from a static-model estimator."
            )
            logger.error(message)
            raise EstimatorConfigError(message)
        derivative = np.asarray(derivative, dtype=float)
        if derivative.shape != freq.shape:
            message = (
                f"Derivative stream of {len(derivative)} values does not "
                f"match {len(freq)} frequency estimates."
            )
            logger.error(message)
            raise EstimatorConfigError(message)
        return derivative.copy()
    if Tr <= 0:
        message = f"Reporting period must be positive, got {Tr}."
        logger.error(message)
        raise EstimatorConfigError(message)
    rocof = np.full(freq.shape, np.nan)
    rocof[1:] = np.diff(freq) / Tr
    return rocof
