"""Tests for the CSV result writer and record reader."""

from datetime import datetime, timezone

import numpy as np
import pandas as pd
import pytest

from rocofbench.adapters.csv_io import formats
from rocofbench.adapters.csv_io.reader import CsvRecordReader
from rocofbench.adapters.csv_io.writer import CsvResultWriter
from rocofbench.application.ports.exceptions.output import (
    OutputNotWritable,
    RecordFormatError,
)
from rocofbench.application.services.metrics import empirical_cdf
from rocofbench.domain.entities import EstimateStream, Waveform
from rocofbench.domain.enums import (
    EstimateFlag,
    MeasurementSource,
    RelayKind,
    ShedEventKind,
)
from rocofbench.domain.grid import SheddingEvent, UflsResult
from tests.factories import (
    EstimatorConfigFactory,
    PhasorEstimateFactory,
    ReferenceSeriesFactory,
)

METADATA = {"dataset": "dataset1", "seed": "1"}


@pytest.fixture
def writer(tmp_path):
    """Create a prepared CSV writer."""
    writer = CsvResultWriter()
    writer.prepare(tmp_path / "run")
    return writer


def _table(path):
    return pd.read_csv(path, comment=formats.COMMENT, keep_default_na=False)


class TestFormats:
    """Tests for the file layout helpers."""

    def test_header_lines(self):
        """Test the metadata block."""
        generated = datetime(2024, 1, 2, 3, 4, 5, tzinfo=timezone.utc)

        header = formats.header_lines({"a": "1"}, generated)

        assert header == "# generated=2024-01-02T03:04:05+00:00\n# a=1\n"

    def test_parse_pairs(self):
        """Test key=value parsing of a comment line."""
        pairs = formats.parse_pairs("# fs=5000.0 unit=kV stray t0=0.5\n")

        assert pairs == {"fs": "5000.0", "unit": "kV", "t0": "0.5"}


class TestCsvResultWriter:
    """Tests for CsvResultWriter."""

    def test_unprepared_writer(self):
        """Test that writing before prepare fails."""
        with pytest.raises(OutputNotWritable):
            CsvResultWriter().write_text("x", "summary.txt", METADATA)

    def test_prepare_on_file(self, tmp_path):
        """Test that a file in place of the directory is rejected."""
        blocker = tmp_path / "blocker"
        blocker.write_text("")

        with pytest.raises(OutputNotWritable):
            CsvResultWriter().prepare(blocker / "run")

    def test_write_stream(self, writer):
        """Test the stream columns and flag encoding."""
        estimates = (
            PhasorEstimateFactory(flags=frozenset({EstimateFlag.FIRST_SAMPLE_ROCOF_UNDEFINED})),
            PhasorEstimateFactory(rocof=0.25),
        )
        stream = EstimateStream(config=EstimatorConfigFactory(), estimates=estimates)

        path = writer.write_stream(stream, "stream.csv", METADATA)

        lines = path.read_text().splitlines()
        assert lines[0].startswith("# generated=")
        assert lines[1] == "# dataset=dataset1"
        frame = _table(path)
        assert list(frame.columns) == formats.STREAM_COLUMNS
        assert frame["flags"].tolist() == ["first_sample_rocof_undefined", ""]
        assert frame["rocof"].iloc[1] == 0.25

    def test_write_rows(self, writer):
        """Test a table of dictionaries."""
        path = writer.write_rows([{"a": 1, "b": "x"}], ["a", "b"], "rows.csv", METADATA)

        assert _table(path).to_dict("records") == [{"a": 1, "b": "x"}]

    def test_write_cdf(self, writer):
        """Test the sorted CDF steps."""
        path = writer.write_cdf(empirical_cdf(np.array([0.3, -0.1, 0.2, 0.0])), "cdf.csv", METADATA)

        frame = _table(path)
        assert frame["x"].tolist() == [0.0, 0.1, 0.2, 0.3]
        assert frame["F"].tolist() == [0.25, 0.5, 0.75, 1.0]

    def test_write_ufls(self, writer):
        """Test trajectory and event files."""
        result = UflsResult(
            source=MeasurementSource.IDEAL, scheme=RelayKind.ROCOF_PROPORTIONAL,
            t=np.array([0.0, 0.02]), freq=np.array([50.0, 49.9]),
            served_mw=np.array([6000.0, 4500.0]), shed_mw=np.array([0.0, 0.0]),
            measured=np.array([0.0, 0.0]),
            events=(SheddingEvent(t=0.01, kind=ShedEventKind.OUTAGE, mw=1500.0),),
            blackout=False, blackout_time=None, eens_mwh=0.5,
        )

        trajectory = writer.write_trajectory(result, "trajectory.csv", METADATA)
        events = writer.write_events(result, "events.csv", METADATA)

        assert "# eens_mwh=0.5" in trajectory.read_text()
        assert len(_table(trajectory)) == 2
        assert _table(events).to_dict("records") == [{"t": 0.01, "kind": "outage", "mw": 1500.0}]

    def test_write_text(self, writer):
        """Test that the summary carries the configuration echo."""
        path = writer.write_text("summary line\n", "summary.txt", METADATA)

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("# generated=")
        assert lines[1:] == ["# dataset=dataset1", "# seed=1", "summary line"]

    def test_write_spectrogram(self, writer):
        """Test the long layout of a spectrogram."""
        magnitude = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])

        path = writer.write_spectrogram(
            np.array([0.0, 1.0]), np.array([10.0, 20.0, 30.0]), magnitude, "spec.csv", METADATA
        )

        frame = _table(path)
        assert frame["t"].tolist() == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]
        assert frame["magnitude"].tolist() == [1.0, 3.0, 5.0, 2.0, 4.0, 6.0]


class TestCsvRecordReader:
    """Tests for CsvRecordReader."""

    @pytest.fixture
    def reader(self):
        """Create a CSV reader."""
        return CsvRecordReader()

    def test_waveform_round_trip(self, writer, reader):
        """Test that an exported record reads back unchanged."""
        w = Waveform(fs=5000.0, samples=np.array([0.1, -0.2, 1 / 3]), t0=0.5, seed=7, unit="kV")

        path = writer.write_waveform(w, "waveform.csv", METADATA)
        read = reader.read_waveform(path)

        assert read.fs == 5000.0
        assert read.t0 == 0.5
        assert read.seed == 7
        assert read.unit == "kV"
        assert np.array_equal(read.samples, w.samples)

    def test_reference_round_trip(self, writer, reader):
        """Test that a written reference reads back with its FD column."""
        reference = ReferenceSeriesFactory(count=4)

        read = reader.read_reference(writer.write_reference(reference, "ref.csv", METADATA))

        assert np.array_equal(read.freq, reference.freq)
        assert np.isnan(read.rocof_fd[0])
        assert np.allclose(read.rocof_fd[1:], 0.0)

    def test_missing_waveform(self, reader, tmp_path):
        """Test that a missing file is a format error."""
        with pytest.raises(RecordFormatError):
            reader.read_waveform(tmp_path / "missing.csv")

    @pytest.mark.parametrize("content", [
        "0.1\n0.2\n",
        "# fs=abc\n0.1\n",
        "# fs=-5\n0.1\n",
        "# fs=5000\nx\n",
    ])
    def test_malformed_waveform(self, reader, tmp_path, content):
        """Test rejected waveform files."""
        path = tmp_path / "w.csv"
        path.write_text(content)

        with pytest.raises(RecordFormatError):
            reader.read_waveform(path)

    @pytest.mark.parametrize("content", [
        "t,freq\n0,50\n1,50\n",
        "t,freq,rocof\n0,50,0\n",
        "t,freq,rocof\n1,50,0\n0,50,0\n",
        "t,freq,rocof\n0,a,0\n1,50,0\n",
    ])
    def test_malformed_reference(self, reader, tmp_path, content):
        """Test rejected reference files."""
        path = tmp_path / "r.csv"
        path.write_text(content)

        with pytest.raises(RecordFormatError):
            reader.read_reference(path)

    def test_missing_reference(self, reader, tmp_path):
        """Test that a missing reference is a format error."""
        with pytest.raises(RecordFormatError):
            reader.read_reference(tmp_path / "missing.csv")
