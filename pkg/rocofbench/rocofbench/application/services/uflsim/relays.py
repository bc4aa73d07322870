"""
Load-shedding relays.

Relays consume measurements in reporting order and return the shedding
orders they issue. An order carries the breaker time, so the simulator
applies it once that time is reached.
"""
import math
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, replace

import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.domain.enums import RelayKind
from rocofbench.domain.grid import GridModel, RelayScheme

_TIME_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Measurement:
    """
    Measurement available to the relay at time t.
    """
    t: float
    freq: float
    rocof: float = math.nan
    nrmse_ppm: float = math.nan


@dataclass(frozen=True)
class ShedOrder:
    decided_at: float
    breaker_at: float
    mw: float


def moving_average(values: np.ndarray, taps: int) -> np.ndarray:
    """
    Causal moving average; the first taps - 1 outputs average what
    is available.

    Raises
    ----------
    SimulationConfigError
        If taps is smaller than one.
    """
    if taps < 1:
        message = f"Moving average needs at least one tap, got {taps}."
        logger.error(message)
        raise SimulationConfigError(message)
    values = np.asarray(values, dtype=float)
    cumulative = np.concatenate(([0.0], np.cumsum(values)))
    index = np.arange(1, len(values) + 1)
    start = np.maximum(index - taps, 0)
    return (cumulative[index] - cumulative[start]) / (index - start)


def validate_scheme(scheme: RelayScheme) -> None:
    problems = []
    delays = (scheme.pickup_delay, scheme.breaker_delay, scheme.lockout, scheme.backup_delay)
    if any(delay < 0 for delay in delays):
        problems.append("delays must be non-negative")
    if scheme.averaging_taps < 1:
        problems.append(f"averaging_taps must be >= 1, got {scheme.averaging_taps}")
    thresholds = [stage.threshold for stage in scheme.stages]
    if any(b >= a for a, b in zip(thresholds, thresholds[1:])):
        problems.append(f"stage thresholds must decrease strictly: {thresholds}")
    if any(not 0 < stage.shed_fraction <= 1 for stage in scheme.stages):
        problems.append("shed fractions must lie in (0, 1]")
    if scheme.kind is RelayKind.FREQUENCY_STAGED:
        if not scheme.stages:
            problems.append("frequency-staged relay needs at least one stage")
    elif scheme.rocof_threshold <= 0:
        problems.append(
            f"ROCOF threshold must be positive, got {scheme.rocof_threshold}"
        )
    if problems:
        message = "Invalid relay scheme: " + "; ".join(problems) + "."
        logger.error(message)
        raise SimulationConfigError(message)


class Relay(ABC):
    """
    Abstract base class for load-shedding relays.
    """
    kind: RelayKind

    def __init__(self, scheme: RelayScheme, grid: GridModel):
        validate_scheme(scheme)
        self.scheme = scheme
        self.grid = grid

    @abstractmethod
    def update(self, measurement: Measurement) -> list[ShedOrder]:
        """
        Feed one measurement.

        Parameters
        ----------
        measurement : Measurement
            Latest measurement, time ordered

        Returns
        ----------
        list[ShedOrder]
            Orders decided at this measurement.
        """
        ...

    def _order(self, t: float, mw: float) -> ShedOrder:
        return ShedOrder(decided_at=t, breaker_at=t + self.scheme.breaker_delay, mw=mw)


class FrequencyStagedRelay(Relay):
    """
    Under-frequency stages, each tripping once after its pickup delay.
    """
    kind = RelayKind.FREQUENCY_STAGED

    def __init__(self, scheme: RelayScheme, grid: GridModel):
        super().__init__(scheme, grid)
        self.pickup_since: list[float | None] = [None] * len(scheme.stages)
        self.tripped = [False] * len(scheme.stages)

    def update(self, measurement: Measurement) -> list[ShedOrder]:
        orders = []
        for index, stage in enumerate(self.scheme.stages):
            if self.tripped[index]:
                continue
            if not measurement.freq < stage.threshold:
                self.pickup_since[index] = None
                continue
            if self.pickup_since[index] is None:
                self.pickup_since[index] = measurement.t
            held = measurement.t - self.pickup_since[index]
            if held + _TIME_TOLERANCE >= self.scheme.pickup_delay:
                self.tripped[index] = True
                mw = stage.shed_fraction * self.grid.base_power
                logger.info(
                    f"Stage {stage.threshold} Hz trips {mw:.0f} MW "
                    f"at {measurement.t:.3f} s"
                )
                orders.append(self._order(measurement.t, mw))
        return orders


class RocofProportionalRelay(Relay):
    """
    Sheds in proportion to the measured negative ROCOF.

    The shed size 2H |ROCOF| / f0 * base_power is the generation deficit
    an inertia H implies; it is taken from the averaged ROCOF at the
    decision instant. With blocking enabled, measurements whose nRMSE
    exceeds the blocking threshold are replaced by the last accepted one.
    The scheme's stages run as an under-frequency backup that catches
    deficits the ROCOF action left uncovered.
    """
    kind = RelayKind.ROCOF_PROPORTIONAL

    def __init__(self, scheme: RelayScheme, grid: GridModel):
        super().__init__(scheme, grid)
        self.backup = None
        if scheme.stages:
            self.backup = FrequencyStagedRelay(
                replace(
                    scheme, kind=RelayKind.FREQUENCY_STAGED,
                    pickup_delay=scheme.backup_delay,
                ),
                grid,
            )
        self.window: deque[float] = deque(maxlen=scheme.averaging_taps)
        self.last_accepted = math.nan
        self.pickup_since: float | None = None
        self.locked_until = -math.inf

    def _accepted_rocof(self, measurement: Measurement) -> float:
        blocked = (
            self.scheme.blocking_enabled
            and measurement.nrmse_ppm > self.scheme.blocking_threshold_ppm
        )
        if blocked:
            logger.debug(f"ROCOF blocked at {measurement.t:.3f} s")
            return self.last_accepted
        self.last_accepted = measurement.rocof
        return measurement.rocof

    def update(self, measurement: Measurement) -> list[ShedOrder]:
        orders = self.backup.update(measurement) if self.backup else []
        return orders + self._rocof_orders(measurement)

    def _rocof_orders(self, measurement: Measurement) -> list[ShedOrder]:
        rocof = self._accepted_rocof(measurement)
        if math.isnan(rocof):
            self.pickup_since = None
            return []
        self.window.append(rocof)
        averaged = sum(self.window) / len(self.window)
        if measurement.t < self.locked_until - _TIME_TOLERANCE:
            return []
        if not averaged < -self.scheme.rocof_threshold:
            self.pickup_since = None
            return []
        if self.pickup_since is None:
            self.pickup_since = measurement.t
        if measurement.t - self.pickup_since + _TIME_TOLERANCE < self.scheme.pickup_delay:
            return []
        mw = 2 * self.grid.H * abs(averaged) / self.grid.f0 * self.grid.base_power
        logger.info(
            f"ROCOF {averaged:.3f} Hz/s at {measurement.t:.3f} s, "
            f"requesting {mw:.0f} MW"
        )
        self.pickup_since = None
        self.locked_until = measurement.t + self.scheme.lockout
        return [self._order(measurement.t, mw)]


def get_relay(scheme: RelayScheme, grid: GridModel) -> Relay:
    """
    Get relay instance for a scheme.

    Raises
    ----------
    SimulationConfigError
        If the relay kind is not supported
    """
    relays = {
        RelayKind.FREQUENCY_STAGED: FrequencyStagedRelay,
        RelayKind.ROCOF_PROPORTIONAL: RocofProportionalRelay,
    }
    if scheme.kind not in relays:
        message = f"Relay kind {scheme.kind} is not supported."
        logger.error(message)
        raise SimulationConfigError(message)
    return relays[scheme.kind](scheme, grid)
