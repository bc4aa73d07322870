from rocofbench.application.ports.exceptions.base import (
    ConfigurationError,
    NumericalFailure
)


class InvalidSignalModel(ConfigurationError):
    """
    Raised when a waveform model or its sampling parameters are invalid.
    """
    message: str = "Invalid signal model."


class RecordTooShort(ConfigurationError):
    message: str = "Record is too short for the requested analysis."


class UndefinedPhase(NumericalFailure):
    """
    Raised when the analytic signal envelope passes through zero.
    """
    message: str = "Phase is undefined where the envelope vanishes."
