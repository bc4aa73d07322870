from pathlib import Path

from loguru import logger

from rocofbench.adapters.csv_io.reader import CsvRecordReader
from rocofbench.adapters.csv_io.writer import CsvResultWriter
from rocofbench.application.ports.exceptions.output import ResultWriterError
from rocofbench.application.ports.record_reader import RecordReaderPort
from rocofbench.application.ports.result_writer import ResultWriterPort
from rocofbench.config.settings import settings

_WRITERS = {"csv": CsvResultWriter}
_READERS = {"csv": CsvRecordReader}


def _backend(registry: dict, kind: str) -> type:
    backend = settings.RESULT_WRITER
    if backend not in registry:
        message = (
            f"Unknown {kind} backend '{backend}'; "
            f"available: {sorted(registry)}."
        )
        logger.error(message)
        raise ResultWriterError(message)
    return registry[backend]


def get_result_writer(output_dir: Path | None = None) -> ResultWriterPort:
    """
    Get result writer instance.

    Parameters
    ----------
    output_dir : Path | None
        Base output directory, settings.OUTPUT_DIR by default

    Returns
    ----------
    ResultWriterPort
        Adapter implementation of ResultWriterPort.

    Raises
    ----------
    ResultWriterError
        If settings.RESULT_WRITER names no known backend.
    """
    writer = _backend(_WRITERS, "result writer")
    logger.debug(f"Using {writer.__name__} as ResultWriter.")
    return writer(output_dir if output_dir is not None else settings.OUTPUT_DIR)


def get_record_reader() -> RecordReaderPort:
    """
    Get record reader instance.

    Returns
    ----------
    RecordReaderPort
        Adapter implementation of RecordReaderPort.
    """
    return _backend(_READERS, "record reader")()
