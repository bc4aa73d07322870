import math
from dataclasses import dataclass, field

import numpy as np

from rocofbench.domain.enums import (
    Algorithm,
    EstimateFlag,
    PerformanceClass,
    RampPhaseConvention,
    ReferenceSource,
    RocofMode,
)


@dataclass(frozen=True)
class ToneComponent:
    """
    Tone component entity.
    A sinusoid described relative to the system frequency and
    the fundamental amplitude.
    """
    harm_index: float
    norm_amplitude: float
    phase: float = 0.0


@dataclass(frozen=True)
class ToneSet:
    """
    Multi-tone model.
    Ordered components, the fundamental included with harm_index 1.
    """
    system_freq: float
    fundamental_amplitude: float
    components: tuple[ToneComponent, ...]

    @property
    def fundamental(self) -> ToneComponent | None:
        for component in self.components:
            if component.harm_index == 1:
                return component
        return None


@dataclass(frozen=True)
class RampSegment:
    """
    One segment of the frequency ramp schedule.
    rate is the ramp parameter in Hz/s, zero for flat segments.
    """
    t_start: float
    t_stop: float
    rate: float = 0.0


@dataclass(frozen=True)
class OscillationModel:
    """
    Amplitude and phase modulated carrier with a piecewise ramp schedule.
    """
    A: float
    f: float
    phi: float
    k_A: float
    f_A: float
    k_phi: float
    f_phi: float
    segments: tuple[RampSegment, ...]
    phase_convention: RampPhaseConvention = RampPhaseConvention.INTEGRAL

    @property
    def duration(self) -> float:
        return self.segments[-1].t_stop if self.segments else 0.0


@dataclass(frozen=True)
class PhasorTriple:
    amplitude: float
    frequency: float
    phase: float


@dataclass(frozen=True)
class StepModel:
    """
    Steady cosine that switches to another steady cosine at t_step.
    distortion holds harmonic add-ons relative to each segment's
    own amplitude, frequency and phase.
    """
    pre: PhasorTriple
    post: PhasorTriple
    t_step: float
    distortion: tuple[ToneComponent, ...] = ()


@dataclass(frozen=True)
class Waveform:
    """
    Waveform entity.
    Uniformly sampled real record with its provenance.
    """
    fs: float
    samples: np.ndarray
    t0: float = 0.0
    label: str = ""
    seed: int | None = None
    unit: str = "V"

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.fs

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(len(self.samples)) / self.fs


@dataclass(frozen=True)
class QualityReport:
    """
    Noise and distortion figures of a record.
    sinad_db and snr_db are math.inf when no residual power is found.
    """
    snr_db: float
    thd_pct: float
    sinad_db: float
    harmonic_span: tuple[int, int]

    @property
    def is_distortion_free(self) -> bool:
        return math.isinf(self.sinad_db)


@dataclass(frozen=True)
class ReferenceSeries:
    """
    Ground truth at reporting instants.
    rocof is the instantaneous derivative, rocof_fd the incremental
    ratio between consecutive instants (first element undefined).
    """
    t: np.ndarray
    freq: np.ndarray
    rocof: np.ndarray
    rocof_fd: np.ndarray
    source: ReferenceSource = ReferenceSource.ANALYTIC

    def __len__(self) -> int:
        return len(self.t)

    @property
    def rocof_fd_valid(self) -> np.ndarray:
        return np.isfinite(self.rocof_fd)


@dataclass(frozen=True)
class EstimatorConfig:
    """
    Estimator configuration.
    Window length, reporting grid, ROCOF formulation and the
    algorithm tunables.
    """
    algorithm: Algorithm
    window_cycles: int = 5
    fs: float = 5000.0
    f_nominal: float = 50.0
    reporting_rate: float = 50.0
    rocof_mode: RocofMode = RocofMode.FINITE_DIFFERENCE
    e_iterations: int = 2
    i_max_iterations: int = 3
    interferer_energy_ratio: float = 1e-3
    interferer_outside_passband: bool = False
    passband: tuple[float, float] = (25.0, 75.0)
    taylor_order: int = 2
    harmonic_max: int = 10
    max_interharmonics: int = 2
    atom_budget: int | None = None
    residual_threshold: float = 1e-4
    condition_limit: float = 1e8
    weighted_fit: bool = False

    @property
    def window_length(self) -> int:
        return int(round(self.window_cycles / self.f_nominal * self.fs))

    @property
    def window_seconds(self) -> float:
        return self.window_cycles / self.f_nominal

    @property
    def reporting_period(self) -> float:
        return 1.0 / self.reporting_rate

    @property
    def hop(self) -> int:
        return int(round(self.fs / self.reporting_rate))

    @property
    def max_atoms(self) -> int:
        """
        Component limit of the Taylor-Fourier fit; by default room for
        the fundamental, every harmonic and every interharmonic.
        """
        if self.atom_budget is not None:
            return self.atom_budget
        return self.harmonic_max + self.max_interharmonics

    @property
    def performance_class(self) -> PerformanceClass | None:
        for performance_class in PerformanceClass:
            if performance_class.window_cycles == self.window_cycles:
                return performance_class
        return None


@dataclass(frozen=True)
class PhasorEstimate:
    """
    PhasorEstimate entity.
    One reporting-instant output stamped at its window midpoint.
    envelope holds the fundamental's polynomial envelope coefficients
    (seconds based, around f_ref) for dynamic-model estimates.
    """
    t_mid: float
    amplitude: float
    phase: float
    freq: float
    rocof: float = math.nan
    rocof_instant: float = math.nan
    nrmse_ppm: float = math.nan
    flags: frozenset[EstimateFlag] = frozenset()
    f_ref: float = math.nan
    envelope: tuple[complex, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.flags


@dataclass(frozen=True)
class EstimateStream:
    """
    Estimates of one (algorithm, class, mode) run in reporting order.
    """
    config: EstimatorConfig
    estimates: tuple[PhasorEstimate, ...]

    def __len__(self) -> int:
        return len(self.estimates)

    def _column(self, name: str) -> np.ndarray:
        return np.array([getattr(e, name) for e in self.estimates], dtype=float)

    @property
    def t(self) -> np.ndarray:
        return self._column("t_mid")

    @property
    def freq(self) -> np.ndarray:
        return self._column("freq")

    @property
    def rocof(self) -> np.ndarray:
        return self._column("rocof")

    @property
    def nrmse(self) -> np.ndarray:
        return self._column("nrmse_ppm")

    @property
    def valid(self) -> np.ndarray:
        return np.array([e.is_valid for e in self.estimates], dtype=bool)


@dataclass(frozen=True)
class ErrorStats:
    """
    ROCOF error statistics.
    pearson is None when either series is constant.
    """
    mean: float
    std: float
    p95_abs: float
    pearson: float | None
    n: int

    @property
    def pearson_defined(self) -> bool:
        return self.pearson is not None


@dataclass(frozen=True)
class EmpiricalCdf:
    """
    Step CDF of error magnitudes.
    """
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def evaluate(self, x: float | np.ndarray) -> float | np.ndarray:
        """
        Evaluate F(x), the fraction of magnitudes not exceeding x.

        Parameters
        ----------
        x : float or np.ndarray
            Evaluation point(s)

        Returns
        ----------
        float or np.ndarray
            Right-continuous CDF values in [0, 1].
        """
        counts = np.searchsorted(self.values, x, side="right")
        result = counts / len(self.values)
        return float(result) if np.ndim(result) == 0 else result

    def quantile(self, q: float) -> float:
        """
        Return the ceil(q * n)-th order statistic.

        Parameters
        ----------
        q : float
            Probability in [0, 1]

        Returns
        ----------
        float
            Order statistic (the smallest value for q = 0).
        """
        n = len(self.values)
        rank = math.ceil(round(q * n, 9))
        index = min(max(rank, 1), n) - 1
        return float(self.values[index])


@dataclass(frozen=True)
class NrmseReport:
    """
    nRMSE summary in ppm.
    """
    values: np.ndarray
    mean: float
    std: float
    max: float
    label: str = ""


@dataclass(frozen=True)
class ScoredStream:
    """
    Estimate stream joined with its error statistics.
    """
    stream: EstimateStream
    errors: np.ndarray
    stats: ErrorStats
    cdf: EmpiricalCdf
    nrmse: NrmseReport | None = None
    transient_flags: np.ndarray = field(
        default_factory=lambda: np.zeros(0, dtype=bool)
    )
