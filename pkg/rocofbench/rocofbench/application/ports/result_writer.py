from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np

from rocofbench.domain.entities import (
    EmpiricalCdf,
    EstimateStream,
    ReferenceSeries,
    Waveform,
)
from rocofbench.domain.grid import UflsResult


class ResultWriterPort(ABC):
    """
    Abstract base class for result writer port.
    Defines the interface for persisting run outputs. Every method takes
    the file name inside the run directory and metadata pairs echoed in
    the file header, and returns the written path.
    """
    @abstractmethod
    def prepare(self, run_dir: Path) -> None:
        """
        Create the run directory.

        Parameters
        ----------
        run_dir : Path
            Directory receiving the run outputs

        Raises
        ----------
        OutputNotWritable
            If the directory cannot be created or written.
        """
        ...

    @abstractmethod
    def write_waveform(self, w: Waveform, name: str, metadata: dict[str, str]) -> Path:
        ...

    @abstractmethod
    def write_reference(
            self,
            reference: ReferenceSeries,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        ...

    @abstractmethod
    def write_stream(
            self,
            stream: EstimateStream,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        """
        Write an estimate stream with columns
        t_mid, amplitude, phase, freq, rocof, nrmse_ppm, flags.
        """
        ...

    @abstractmethod
    def write_rows(
            self,
            rows: list[dict],
            columns: list[str],
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        """
        Write a table of scalar rows, such as statistics or nRMSE summaries.
        """
        ...

    @abstractmethod
    def write_cdf(self, cdf: EmpiricalCdf, name: str, metadata: dict[str, str]) -> Path:
        ...

    @abstractmethod
    def write_trajectory(
            self,
            result: UflsResult,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        ...

    @abstractmethod
    def write_events(
            self,
            result: UflsResult,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        ...

    @abstractmethod
    def write_spectrogram(
            self,
            t: np.ndarray,
            f: np.ndarray,
            magnitude: np.ndarray,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        ...

    @abstractmethod
    def write_text(self, text: str, name: str, metadata: dict[str, str]) -> Path:
        ...
