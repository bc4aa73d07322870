from enum import StrEnum, auto

class Algorithm(StrEnum):
    """
    Enum for synchrophasor estimation algorithms.
    Static-model interpolated DFT variants and the dynamic Taylor-Fourier fit.
    """
    E_IPDFT = auto()
    I_IPDFT = auto()
    TFM = auto()

class RocofMode(StrEnum):
    """
    Enum for ROCOF formulations.
    """
    FINITE_DIFFERENCE = auto()
    DERIVATIVE = auto()

class PerformanceClass(StrEnum):
    """
    Enum for PMU performance classes.
    Each class maps to an observation window length in nominal cycles.
    """
    P = "P"
    M = "M"

    @property
    def window_cycles(self) -> int:
        return 3 if self is PerformanceClass.P else 5

class ReferenceSource(StrEnum):
    """
    Enum for the way a ground-truth series was obtained.
    """
    ANALYTIC = auto()
    NUMERIC_DIFFERENTIATION = auto()

class EstimateFlag(StrEnum):
    """
    Enum for per-window estimate flags.
    Flagged samples are excluded from error statistics.
    """
    FIRST_SAMPLE_ROCOF_UNDEFINED = auto()
    CONVERGENCE_FAILED = auto()

class RampPhaseConvention(StrEnum):
    """
    Enum for the reading of the ramp phase term of the oscillation model.
    INTEGRAL integrates the piecewise-linear frequency exactly,
    LITERAL adds R_f * t^2 radians per segment.
    """
    INTEGRAL = auto()
    LITERAL = auto()

class RelayKind(StrEnum):
    """
    Enum for load-shedding relay schemes.
    """
    FREQUENCY_STAGED = auto()
    ROCOF_PROPORTIONAL = auto()

class MeasurementSource(StrEnum):
    """
    Enum for the measurement chain feeding a relay.
    PMU_1 is a class P static estimator, PMU_2 a class M dynamic one,
    IDEAL reads the true frequency and ROCOF of the simulated bus.
    """
    PLL = auto()
    PMU_1 = auto()
    PMU_2 = auto()
    IDEAL = auto()

class DatasetName(StrEnum):
    """
    Enum for the runnable scenarios.
    """
    DATASET1 = auto()
    DATASET2 = auto()
    DATASET3 = auto()
    UFLS = auto()
    CUSTOM = auto()

class ShedEventKind(StrEnum):
    """
    Enum for entries of the UFLS event log.
    """
    OUTAGE = auto()
    SHED = auto()
    BLACKOUT = auto()
    LOSS_OF_LOCK = auto()
    RESTORE = auto()
    RECONNECT = auto()
