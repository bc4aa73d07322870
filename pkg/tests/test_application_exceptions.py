"""Tests for application exceptions."""

import pytest

from rocofbench.application.ports.exceptions.base import (
    ConfigurationError,
    NumericalFailure,
    RocofBenchError,
)
from rocofbench.application.ports.exceptions.estimation import (
    ConvergenceFailed,
    EstimatorConfigError,
    IllConditionedFit,
)
from rocofbench.application.ports.exceptions.metrics import (
    MetricsInputError,
    ZeroEnergyWindow,
)
from rocofbench.application.ports.exceptions.output import (
    OutputNotWritable,
    RecordFormatError,
    ResultWriterError,
    UnknownDataset,
)
from rocofbench.application.ports.exceptions.signal import (
    InvalidSignalModel,
    RecordTooShort,
    UndefinedPhase,
)
from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)


class TestRocofBenchError:
    """Tests for RocofBenchError."""

    def test_default_message(self):
        """Test that the class message is used without an argument."""
        error = RocofBenchError()

        assert str(error) == "There was an error in the benchmark workflow."

    def test_custom_message(self):
        """Test that a custom message replaces the default."""
        error = RocofBenchError("Custom error")

        assert str(error) == "Custom error"


class TestHierarchy:
    """Tests for the split between configuration and numerical errors."""

    @pytest.mark.parametrize("exception", [
        EstimatorConfigError, MetricsInputError, UnknownDataset,
        ResultWriterError, OutputNotWritable, RecordFormatError,
        InvalidSignalModel, RecordTooShort, SimulationConfigError,
    ])
    def test_configuration_errors(self, exception):
        """Test that input problems are configuration errors."""
        assert issubclass(exception, ConfigurationError)
        assert not issubclass(exception, NumericalFailure)

    @pytest.mark.parametrize("exception", [
        ConvergenceFailed, IllConditionedFit, ZeroEnergyWindow, UndefinedPhase,
    ])
    def test_numerical_failures(self, exception):
        """Test that computation problems are numerical failures."""
        assert issubclass(exception, NumericalFailure)
        assert not issubclass(exception, ConfigurationError)

    def test_ill_conditioned_is_convergence_failure(self):
        """Test that stream runners can catch ill-conditioned fits as failures."""
        with pytest.raises(ConvergenceFailed):
            raise IllConditionedFit()

    def test_writer_errors(self):
        """Test writer error defaults."""
        assert str(OutputNotWritable()) == "Output directory is not writable."
        assert isinstance(RecordFormatError(), ResultWriterError)
