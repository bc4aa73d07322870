from rocofbench.application.ports.exceptions.base import (
    ConfigurationError,
    NumericalFailure
)


class EstimatorConfigError(ConfigurationError):
    message: str = "Invalid estimator configuration."


class ConvergenceFailed(NumericalFailure):
    """
    Raised when an estimator cannot produce a trustworthy estimate
    for a window. Stream runners turn it into a per-window flag.
    """
    message: str = "Estimator did not converge."


class IllConditionedFit(ConvergenceFailed):
    message: str = "Least-squares fit is ill-conditioned."
