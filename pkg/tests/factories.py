"""factory-boy factories for domain and DTO dataclasses."""

import math
from pathlib import Path

import factory
import numpy as np

from rocofbench.application.dtos.run_config import RunConfig
from rocofbench.domain.entities import (
    EstimatorConfig,
    PhasorEstimate,
    ReferenceSeries,
    Waveform,
)
from rocofbench.domain.enums import (
    Algorithm,
    DatasetName,
    PerformanceClass,
    RelayKind,
)
from rocofbench.domain.grid import (
    GridModel,
    LoadBlock,
    OutageEvent,
    RelayScheme,
    RelayStage,
)


def tone(freq=50.0, amplitude=1.0, phase=0.0, fs=5000.0, n=5000):
    """Samples of a cosine whose phase is `phase` at t = 0."""
    t = np.arange(n) / fs
    return amplitude * np.cos(2 * np.pi * freq * t + phase)


def centred_tone(freq, n, fs=5000.0, amplitude=1.0, phase=0.0):
    """Window samples with phase `phase` at sample n / 2."""
    m = np.arange(n)
    return amplitude * np.cos(2 * np.pi * freq * (m - n / 2) / fs + phase)


class EstimatorConfigFactory(factory.Factory):
    """Factory for EstimatorConfig."""

    class Meta:
        model = EstimatorConfig

    algorithm = Algorithm.E_IPDFT
    window_cycles = PerformanceClass.M.window_cycles


class WaveformFactory(factory.Factory):
    """Factory for a steady 50 Hz waveform."""

    class Meta:
        model = Waveform

    class Params:
        freq = 50.0
        duration = 1.0

    fs = 5000.0
    samples = factory.LazyAttribute(
        lambda o: tone(o.freq, fs=o.fs, n=int(round(o.duration * o.fs)))
    )
    label = "tone"


class PhasorEstimateFactory(factory.Factory):
    """Factory for PhasorEstimate."""

    class Meta:
        model = PhasorEstimate

    t_mid = factory.Sequence(lambda n: 0.05 + 0.02 * n)
    amplitude = 1.0
    phase = 0.0
    freq = 50.0
    rocof = 0.0
    nrmse_ppm = 10.0


class ReferenceSeriesFactory(factory.Factory):
    """Factory for a flat 50 Hz reference."""

    class Meta:
        model = ReferenceSeries

    class Params:
        count = 10

    t = factory.LazyAttribute(lambda o: 0.05 + 0.02 * np.arange(o.count))
    freq = factory.LazyAttribute(lambda o: np.full(o.count, 50.0))
    rocof = factory.LazyAttribute(lambda o: np.zeros(o.count))
    rocof_fd = factory.LazyAttribute(
        lambda o: np.concatenate(([math.nan], np.zeros(o.count - 1)))
    )


class GridModelFactory(factory.Factory):
    """Factory for a short-horizon surrogate grid."""

    class Meta:
        model = GridModel

    class Params:
        outage_mw = 1500.0
        outage_t = 0.5

    f0 = 50.0
    H = 3.0
    D = 1.0
    base_power = 6000.0
    load_blocks = factory.LazyFunction(
        lambda: tuple(LoadBlock(size_mw=125.0, priority=rank) for rank in range(48))
    )
    outages = factory.LazyAttribute(
        lambda o: (OutageEvent(t=o.outage_t, delta_mw=o.outage_mw),)
        if o.outage_mw else ()
    )
    f_collapse = 47.5
    t_start = 0.0
    t_stop = 2.0
    dt = 5e-4


class RocofSchemeFactory(factory.Factory):
    """Factory for a ROCOF-proportional relay scheme."""

    class Meta:
        model = RelayScheme

    kind = RelayKind.ROCOF_PROPORTIONAL
    rocof_threshold = 1.5
    pickup_delay = 0.08
    breaker_delay = 0.02
    lockout = 1.0


class StagedSchemeFactory(factory.Factory):
    """Factory for a frequency-staged relay scheme."""

    class Meta:
        model = RelayScheme

    class Params:
        fraction = 0.125

    kind = RelayKind.FREQUENCY_STAGED
    stages = factory.LazyAttribute(
        lambda o: tuple(
            RelayStage(threshold=threshold, shed_fraction=o.fraction)
            for threshold in (49.0, 48.8, 48.6, 48.4)
        )
    )
    pickup_delay = 0.6
    breaker_delay = 0.3


class RunConfigFactory(factory.Factory):
    """Factory for RunConfig."""

    class Meta:
        model = RunConfig

    dataset = DatasetName.DATASET1
    algorithms = (Algorithm.E_IPDFT,)
    classes = (PerformanceClass.P,)
    seed = 1
    output_dir = Path("results")
