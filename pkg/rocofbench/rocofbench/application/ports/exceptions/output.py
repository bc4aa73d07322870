from rocofbench.application.ports.exceptions.base import ConfigurationError


class UnknownDataset(ConfigurationError):
    message: str = "Unknown dataset."


class ResultWriterError(ConfigurationError):
    """
    Base exception class for errors occurring while storing results.
    """
    message: str = "There was an error with result writer."


class OutputNotWritable(ResultWriterError):
    message: str = "Output directory is not writable."


class RecordFormatError(ResultWriterError):
    """
    Raised when an input record file does not follow its format.
    """
    message: str = "Record file has an invalid format."
