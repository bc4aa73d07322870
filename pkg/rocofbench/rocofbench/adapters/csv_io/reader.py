from pathlib import Path
from typing import NoReturn

import numpy as np
import pandas as pd
from loguru import logger

from rocofbench.adapters.csv_io import formats
from rocofbench.application.ports.exceptions.output import RecordFormatError
from rocofbench.application.ports.record_reader import RecordReaderPort
from rocofbench.application.services import truth
from rocofbench.domain.entities import ReferenceSeries, Waveform
from rocofbench.domain.enums import ReferenceSource


def _fail(message: str, cause: Exception | None = None) -> NoReturn:
    logger.error(message)
    raise RecordFormatError(message) from cause


def _metadata(path: Path) -> dict[str, str]:
    pairs = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if not line.startswith(formats.COMMENT):
                    break
                # the sampling line comes first and wins over echoed metadata
                for key, value in formats.parse_pairs(line).items():
                    pairs.setdefault(key, value)
    except OSError as e:
        _fail(f"Cannot read {path}: {e}", e)
    return pairs


class CsvRecordReader(RecordReaderPort):
    """
    CSV record reader.

    Reads waveforms and references in the layout written by
    CsvResultWriter, so that exported records can be fed back
    through the custom dataset.
    """
    def read_waveform(self, path: Path) -> Waveform:
        """
        Read a sampled waveform.

        Parameters
        ----------
        path : Path
            File starting with '# fs=<Hz> unit=<text> t0=<s> seed=<int|none>'
            followed by one sample per line

        Returns
        ----------
        Waveform
            Samples with sampling rate and provenance metadata

        Raises
        ----------
        RecordFormatError
            If the file is missing, has no usable sampling rate
            or holds non-numeric samples.
        """
        path = Path(path)
        logger.debug(f"Reading waveform from {path}")
        pairs = _metadata(path)
        if "fs" not in pairs:
            _fail(f"Waveform file {path} has no fs header.")
        try:
            fs = float(pairs["fs"])
            t0 = float(pairs.get("t0", "0"))
            seed_text = pairs.get("seed", "none")
            seed = None if seed_text == "none" else int(seed_text)
        except ValueError as e:
            _fail(f"Waveform header of {path} is malformed: {e}", e)
        if not np.isfinite(fs) or fs <= 0:
            _fail(f"Waveform file {path} has invalid sampling rate {fs}.")
        try:
            frame = pd.read_csv(path, comment=formats.COMMENT, header=None)
            samples = frame.iloc[:, 0].to_numpy(dtype=float)
        except (ValueError, pd.errors.EmptyDataError) as e:
            _fail(f"Waveform samples of {path} are malformed: {e}", e)
        if not len(samples) or not np.all(np.isfinite(samples)):
            _fail(f"Waveform file {path} holds no finite samples.")
        logger.info(f"Read {len(samples)} samples at {fs} Hz from {path}")
        return Waveform(
            fs=fs, samples=samples, t0=t0, label=path.stem,
            seed=seed, unit=pairs.get("unit", "V"),
        )

    def read_reference(self, path: Path) -> ReferenceSeries:
        """
        Read a reference series.

        Parameters
        ----------
        path : Path
            File with t, freq and rocof columns

        Returns
        ----------
        ReferenceSeries
            Reference on the file's time grid; the incremental ROCOF
            assumes a uniform grid.

        Raises
        ----------
        RecordFormatError
            If the file is missing, lacks a column or is not
            strictly increasing in time.
        """
        path = Path(path)
        logger.debug(f"Reading reference from {path}")
        try:
            frame = pd.read_csv(path, comment=formats.COMMENT)
        except FileNotFoundError as e:
            _fail(f"Reference file {path} does not exist.", e)
        except (OSError, ValueError, pd.errors.EmptyDataError) as e:
            _fail(f"Reference file {path} is malformed: {e}", e)
        missing = [c for c in formats.REFERENCE_COLUMNS if c not in frame.columns]
        if missing:
            _fail(f"Reference file {path} lacks column(s) {missing}.")
        try:
            t, freq, rocof = (
                frame[c].to_numpy(dtype=float) for c in formats.REFERENCE_COLUMNS
            )
        except ValueError as e:
            _fail(f"Reference file {path} holds non-numeric values: {e}", e)
        if len(t) < 2 or np.any(np.diff(t) <= 0):
            _fail(f"Reference file {path} needs at least two increasing instants.")
        rocof_fd = truth.rocof_reference(freq, float(t[1] - t[0]))
        return ReferenceSeries(
            t=t, freq=freq, rocof=rocof, rocof_fd=rocof_fd,
            source=ReferenceSource.ANALYTIC,
        )
