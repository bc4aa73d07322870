from abc import ABC, abstractmethod
from pathlib import Path

from rocofbench.domain.entities import ReferenceSeries, Waveform


class RecordReaderPort(ABC):
    """
    Abstract base class for record reader port.
    Defines the interface for loading recorded inputs.
    """
    @abstractmethod
    def read_waveform(self, path: Path) -> Waveform:
        """
        Read a sampled waveform.

        Parameters
        ----------
        path : Path
            Waveform file

        Returns
        ----------
        Waveform
            Samples with sampling rate and provenance metadata

        Raises
        ----------
        RecordFormatError
            If the file is missing or malformed.
        """
        ...

    @abstractmethod
    def read_reference(self, path: Path) -> ReferenceSeries:
        """
        Read a reference series.

        Parameters
        ----------
        path : Path
            Reference file with t, freq and rocof columns

        Returns
        ----------
        ReferenceSeries
            Reference on the file's time grid

        Raises
        ----------
        RecordFormatError
            If the file is missing or malformed.
        """
        ...
