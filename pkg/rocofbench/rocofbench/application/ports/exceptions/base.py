class RocofBenchError(Exception):
    """
    Base exception class for errors occurring in the benchmark workflow.
    """
    message: str = "There was an error in the benchmark workflow."

    def __init__(self, message: str = None, *args) -> None:
        """
        Initialize the exception with a custom message.

        Parameters
        ----------
        message : str | None
            Custom error message. If not provided, self.message is used.
        *args
            Additional arguments
        """
        super().__init__(message or self.message, *args)


class ConfigurationError(RocofBenchError):
    """
    Exception for invalid models, parameters or run configurations.
    Raised before any computation starts, the run cannot succeed
    without a change of input.
    """
    message: str = "Invalid configuration."


class NumericalFailure(RocofBenchError):
    """
    Exception for numerical failures during computation.
    Raised when valid input leads to an undefined or unstable result.
    """
    message: str = "Numerical failure during computation."
