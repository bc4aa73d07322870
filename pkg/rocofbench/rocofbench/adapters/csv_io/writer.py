import os
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from rocofbench.adapters.csv_io import formats
from rocofbench.application.ports.exceptions.output import OutputNotWritable
from rocofbench.application.ports.result_writer import ResultWriterPort
from rocofbench.domain.entities import (
    EmpiricalCdf,
    EstimateStream,
    ReferenceSeries,
    Waveform,
)
from rocofbench.domain.grid import UflsResult


class CsvResultWriter(ResultWriterPort):
    """
    CSV result writer.

    Writes one file per output inside the run directory. Numeric values
    are written with full precision so that a reproduced run matches
    byte for byte apart from the generation timestamp.
    """
    def __init__(self, output_dir: Path | None = None) -> None:
        self.run_dir = Path(output_dir) if output_dir is not None else None

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
        run_dir = Path(run_dir)
        try:
            run_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            message = f"Cannot create output directory {run_dir}: {e}"
            logger.error(message)
            raise OutputNotWritable(message) from e
        if not os.access(run_dir, os.W_OK):
            message = f"Output directory {run_dir} is not writable."
            logger.error(message)
            raise OutputNotWritable(message)
        self.run_dir = run_dir
        logger.debug(f"Writing results to {run_dir}")

    def _path(self, name: str) -> Path:
        if self.run_dir is None:
            message = "Result writer used before a run directory was prepared."
            logger.error(message)
            raise OutputNotWritable(message)
        return self.run_dir / name

    def _write(
            self,
            name: str,
            header: str,
            frame: pd.DataFrame,
            column_names: bool = True
    ) -> Path:
        path = self._path(name)
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(header)
                frame.to_csv(
                    handle, index=False, header=column_names,
                    float_format=formats.FLOAT_FORMAT, lineterminator="\n",
                )
        except OSError as e:
            message = f"Cannot write {path}: {e}"
            logger.error(message)
            raise OutputNotWritable(message) from e
        logger.debug(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_waveform(self, w: Waveform, name: str, metadata: dict[str, str]) -> Path:
        """
        Write a record: the sampling header line, metadata lines,
        then one sample per line.
        """
        header = (
            formats.waveform_header(w.fs, w.unit, w.t0, w.seed)
            + formats.header_lines(metadata)
        )
        frame = pd.DataFrame({"sample": np.asarray(w.samples, dtype=float)})
        return self._write(name, header, frame, column_names=False)

    def write_reference(
            self,
            reference: ReferenceSeries,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        frame = pd.DataFrame({
            "t": reference.t, "freq": reference.freq, "rocof": reference.rocof,
        }, columns=formats.REFERENCE_COLUMNS)
        return self._write(name, formats.header_lines(metadata), frame)

    def write_stream(
            self,
            stream: EstimateStream,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        """
        Write an estimate stream with columns
        t_mid, amplitude, phase, freq, rocof, flags, nrmse_ppm.
        Flags are joined with '|', an empty field means a valid estimate.
        """
        frame = pd.DataFrame([
            {
                "t_mid": e.t_mid,
                "amplitude": e.amplitude,
                "phase": e.phase,
                "freq": e.freq,
                "rocof": e.rocof,
                "flags": formats.FLAG_SEPARATOR.join(sorted(f.value for f in e.flags)),
                "nrmse_ppm": e.nrmse_ppm,
            }
            for e in stream.estimates
        ], columns=formats.STREAM_COLUMNS)
        return self._write(name, formats.header_lines(metadata), frame)

    def write_rows(
            self,
            rows: list[dict],
            columns: list[str],
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        frame = pd.DataFrame(rows, columns=columns)
        return self._write(name, formats.header_lines(metadata), frame)

    def write_cdf(self, cdf: EmpiricalCdf, name: str, metadata: dict[str, str]) -> Path:
        x = np.sort(np.asarray(cdf.values, dtype=float))
        frame = pd.DataFrame({
            "x": x, "F": np.arange(1, len(x) + 1) / max(len(x), 1),
        }, columns=formats.CDF_COLUMNS)
        return self._write(name, formats.header_lines(metadata), frame)

    def write_trajectory(
            self,
            result: UflsResult,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        summary = {
            **metadata,
            "blackout": str(result.blackout).lower(),
            "eens_mwh": repr(float(result.eens_mwh)),
        }
        frame = pd.DataFrame({
            "t": result.t, "freq": result.freq,
            "served_mw": result.served_mw, "shed_mw": result.shed_mw,
        }, columns=formats.TRAJECTORY_COLUMNS)
        return self._write(name, formats.header_lines(summary), frame)

    def write_events(
            self,
            result: UflsResult,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        frame = pd.DataFrame([
            {"t": event.t, "kind": event.kind.value, "mw": event.mw}
            for event in result.events
        ], columns=formats.EVENT_COLUMNS)
        return self._write(name, formats.header_lines(metadata), frame)

    def write_spectrogram(
            self,
            t: np.ndarray,
            f: np.ndarray,
            magnitude: np.ndarray,
            name: str,
            metadata: dict[str, str]
    ) -> Path:
        """
        Write a spectrogram in long format, one row per (t, f) cell,
        time-major.
        """
        tt, ff = np.meshgrid(t, f, indexing="ij")
        frame = pd.DataFrame({
            "t": tt.ravel(), "f": ff.ravel(),
            "magnitude": np.asarray(magnitude).T.ravel(),
        }, columns=formats.SPECTROGRAM_COLUMNS)
        return self._write(name, formats.header_lines(metadata), frame)

    def write_text(self, text: str, name: str, metadata: dict[str, str]) -> Path:
        path = self._path(name)
        try:
            path.write_text(formats.header_lines(metadata) + text, encoding="utf-8")
        except OSError as e:
            message = f"Cannot write {path}: {e}"
            logger.error(message)
            raise OutputNotWritable(message) from e
        logger.debug(f"Wrote {path}")
        return path
