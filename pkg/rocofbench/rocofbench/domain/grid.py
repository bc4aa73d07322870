import math
from dataclasses import dataclass

import numpy as np

from rocofbench.domain.enums import (
    MeasurementSource,
    RelayKind,
    ShedEventKind,
)


@dataclass(frozen=True)
class LoadBlock:
    """
    Sheddable load block.
    Lower priority rank is shed first.
    """
    size_mw: float
    priority: int


@dataclass(frozen=True)
class OutageEvent:
    """
    Generation loss of delta_mw at time t.
    """
    t: float
    delta_mw: float


@dataclass(frozen=True)
class BusTone:
    """
    Fixed-frequency tone superposed on the bus voltage, amplitude
    relative to the fundamental.
    """
    freq: float
    amplitude: float


@dataclass(frozen=True)
class GridModel:
    """
    Single-bus aggregate grid.
    H and D are per unit on base_power; the grid collapses
    once frequency drops below f_collapse.
    With restoration_delay set, lost generation returns and every
    shed block reconnects that long after its own event.
    """
    f0: float = 50.0
    H: float = 3.0
    D: float = 1.0
    base_power: float = 6000.0
    load_blocks: tuple[LoadBlock, ...] = ()
    outages: tuple[OutageEvent, ...] = ()
    f_collapse: float = 47.5
    t_start: float = 0.0
    t_stop: float = 10.0
    dt: float = 5e-4
    restoration_delay: float | None = None
    bus_tones: tuple[BusTone, ...] = ()

    @property
    def scheduled_load(self) -> float:
        return float(sum(block.size_mw for block in self.load_blocks))


@dataclass(frozen=True)
class PllConfig:
    """
    PI loop PLL gains; kp in (rad/s)/rad, ki in (rad/s^2)/rad.
    """
    kp: float = 180.0
    ki: float = 3200.0
    fs: float = 5000.0
    f0: float = 50.0

    @property
    def natural_frequency(self) -> float:
        return math.sqrt(self.ki)

    @property
    def damping(self) -> float:
        return self.kp / (2.0 * math.sqrt(self.ki))


@dataclass(frozen=True)
class RelayStage:
    threshold: float
    shed_fraction: float


@dataclass(frozen=True)
class RelayScheme:
    """
    Load-shedding relay configuration.
    Frequency stages shed a fraction of base power once the measured
    frequency stays below their threshold for pickup_delay; the ROCOF
    relay sizes its action from the measured ROCOF. Its stages, if any,
    act as under-frequency backup with backup_delay as pickup delay.
    Breaker action follows the decision after breaker_delay.
    """
    kind: RelayKind
    stages: tuple[RelayStage, ...] = ()
    rocof_threshold: float = 1.5
    pickup_delay: float = 0.08
    breaker_delay: float = 0.02
    lockout: float = 1.0
    averaging_taps: int = 1
    blocking_enabled: bool = False
    blocking_threshold_ppm: float = math.inf
    backup_delay: float = 0.5


@dataclass(frozen=True)
class SheddingEvent:
    t: float
    kind: ShedEventKind
    mw: float


@dataclass
class UflsState:
    """
    Mutable state of the closed-loop run.
    """
    t: float
    freq: float
    generation_mw: float
    served_mw: float
    blackout: bool = False


@dataclass(frozen=True)
class UflsResult:
    """
    UflsResult entity.
    Trajectory on the reporting grid, event log and energy not served.
    """
    source: MeasurementSource
    scheme: RelayKind
    t: np.ndarray
    freq: np.ndarray
    served_mw: np.ndarray
    shed_mw: np.ndarray
    measured: np.ndarray
    events: tuple[SheddingEvent, ...]
    blackout: bool
    blackout_time: float | None
    eens_mwh: float

    @property
    def total_shed_mw(self) -> float:
        return float(sum(
            event.mw for event in self.events
            if event.kind is ShedEventKind.SHED
        ))
