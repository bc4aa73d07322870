from rocofbench.application.ports.exceptions.base import (
    ConfigurationError,
    NumericalFailure
)


class MetricsInputError(ConfigurationError):
    """
    Raised when sequences handed to a metric cannot be scored.
    """
    message: str = "Invalid input for metric computation."


class ZeroEnergyWindow(NumericalFailure):
    message: str = "Window has zero energy."
