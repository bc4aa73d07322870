"""
Closed-loop under-frequency load-shedding run.

Per reporting interval the swing dynamics advance, the bus voltage is
synthesized as a unit carrier whose phase integrates the simulated
frequency, the measurement chain turns it into frequency and ROCOF,
and the relay issues shedding orders that act after the breaker delay.
With a restoration delay, lost generation returns and every shed block
reconnects that long after its own event, so the energy not served
is the shed amount times the delay.
"""
import math
from dataclasses import dataclass, field, replace

import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.estimation import (
    ConvergenceFailed,
)
from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.application.services.estimators.stream import get_estimator
from rocofbench.application.services.uflsim.dynamics import (
    frequency_slope,
    step_dynamics,
    validate_grid,
)
from rocofbench.application.services.uflsim.pll import PhaseLockedLoop
from rocofbench.application.services.uflsim.relays import (
    Measurement,
    ShedOrder,
    get_relay,
)
from rocofbench.application.services.wavegen import (
    NOISE_DISABLED,
    noise_generator,
)
from rocofbench.domain.entities import EstimatorConfig
from rocofbench.domain.enums import (
    Algorithm,
    MeasurementSource,
    RocofMode,
    ShedEventKind,
)
from rocofbench.domain.grid import (
    GridModel,
    LoadBlock,
    PllConfig,
    RelayScheme,
    SheddingEvent,
    UflsResult,
    UflsState,
)

_TIME_TOLERANCE = 1e-9
_SECONDS_PER_HOUR = 3600.0


def measurement_profile(
        source: MeasurementSource,
        fs: float = 5000.0,
        f0: float = 50.0,
        reporting_rate: float = 50.0
) -> EstimatorConfig | None:
    """
    Estimator behind a PMU measurement source.

    Returns
    ----------
    EstimatorConfig or None
        Class P e-IpDFT with finite-difference ROCOF for PMU_1, class M
        Taylor-Fourier with derivative ROCOF for PMU_2, None otherwise.
    """
    profiles = {
        MeasurementSource.PMU_1: (Algorithm.E_IPDFT, 3, RocofMode.FINITE_DIFFERENCE),
        MeasurementSource.PMU_2: (Algorithm.TFM, 5, RocofMode.DERIVATIVE),
    }
    if source not in profiles:
        return None
    algorithm, cycles, mode = profiles[source]
    return EstimatorConfig(
        algorithm=algorithm, window_cycles=cycles, fs=fs, f_nominal=f0,
        reporting_rate=reporting_rate, rocof_mode=mode,
    )


class MeasurementChain:
    """
    Turns each reporting interval of samples into a relay measurement.
    """

    def __init__(
            self,
            source: MeasurementSource,
            grid: GridModel,
            fs: float,
            reporting_rate: float,
            pll: PllConfig | None = None,
            profile: EstimatorConfig | None = None
    ):
        self.source = source
        self.grid = grid
        self.Tr = 1.0 / reporting_rate
        self.previous_freq = math.nan
        self.loop = None
        self.profile = None
        if source is MeasurementSource.PLL:
            pll = pll or PllConfig(fs=fs, f0=grid.f0)
            self.loop = PhaseLockedLoop(pll, t0=grid.t_start)
        elif source is not MeasurementSource.IDEAL:
            self.profile = profile or measurement_profile(
                source, fs, grid.f0, reporting_rate
            )
            if self.profile is None:
                message = f"Measurement source {source} is not supported."
                logger.error(message)
                raise SimulationConfigError(message)
            self.estimator = get_estimator(self.profile.algorithm)
            self.recent = np.zeros(0)

    def _finite_difference(self, freq: float) -> float:
        rocof = (freq - self.previous_freq) / self.Tr
        self.previous_freq = freq
        return rocof

    def measure(self, t: float, block: np.ndarray, state: UflsState, imbalance_pu: float) -> Measurement:
        if self.source is MeasurementSource.IDEAL:
            return Measurement(
                t=t, freq=state.freq,
                rocof=frequency_slope(self.grid, state.freq, imbalance_pu),
            )
        if self.loop is not None:
            freq = float(np.mean(self.loop.process(block)))
            return Measurement(t=t, freq=freq, rocof=self._finite_difference(freq))
        return self._estimate(t, block)

    def _estimate(self, t: float, block: np.ndarray) -> Measurement:
        n = self.profile.window_length
        self.recent = np.concatenate((self.recent, block))[-n:]
        if len(self.recent) < n:
            return Measurement(t=t, freq=math.nan)
        try:
            estimate = self.estimator.estimate(self.recent, self.profile, t - n / (2 * self.profile.fs))
        except ConvergenceFailed as error:
            logger.debug(f"PMU estimate at {t:.3f} s failed: {error}")
            self.previous_freq = math.nan
            return Measurement(t=t, freq=math.nan)
        if self.profile.rocof_mode is RocofMode.DERIVATIVE:
            rocof = estimate.rocof_instant
            self.previous_freq = estimate.freq
        else:
            rocof = self._finite_difference(estimate.freq)
        return Measurement(t=t, freq=estimate.freq, rocof=rocof)


@dataclass
class _Ledger:
    """
    Load blocks still connected, blocks waiting to reconnect and the
    event log.
    """
    remaining: list[LoadBlock]
    restoration_delay: float | None = None
    pending: list[tuple[float, list[LoadBlock]]] = field(default_factory=list)
    events: list[SheddingEvent] = field(default_factory=list)

    @property
    def connected_mw(self) -> float:
        return float(sum(block.size_mw for block in self.remaining))

    def shed(self, t: float, requested_mw: float) -> float:
        """
        Drop blocks in priority order until the request is covered.
        """
        dropped = []
        shed = 0.0
        while self.remaining and shed < requested_mw - _TIME_TOLERANCE:
            block = self.remaining.pop(0)
            dropped.append(block)
            shed += block.size_mw
        if shed > 0:
            self.events.append(SheddingEvent(t=t, kind=ShedEventKind.SHED, mw=shed))
            logger.info(f"Shed {shed:.0f} MW at {t:.4f} s")
            if self.restoration_delay is not None:
                self.pending.append((t + self.restoration_delay, dropped))
        return shed

    def reconnect(self, t: float) -> None:
        due = [entry for entry in self.pending if entry[0] <= t + _TIME_TOLERANCE]
        for entry in due:
            self.pending.remove(entry)
            blocks = entry[1]
            self.remaining = sorted(self.remaining + blocks, key=lambda b: b.priority)
            mw = float(sum(block.size_mw for block in blocks))
            self.events.append(SheddingEvent(t=t, kind=ShedEventKind.RECONNECT, mw=mw))
            logger.info(f"Reconnected {mw:.0f} MW at {t:.4f} s")


def _validate_rates(grid: GridModel, fs: float, reporting_rate: float) -> tuple[int, int]:
    steps = (1.0 / reporting_rate) / grid.dt
    samples = fs / reporting_rate
    if abs(steps - round(steps)) > 1e-6 or abs(samples - round(samples)) > 1e-6:
        message = (
            f"Reporting period {1 / reporting_rate} s is not a whole number "
            f"of integration steps ({grid.dt} s) and samples ({fs} Hz)."
        )
        logger.error(message)
        raise SimulationConfigError(message)
    return int(round(steps)), int(round(samples))


def run_ufls(
        grid: GridModel,
        scheme: RelayScheme,
        source: MeasurementSource,
        snr_db: float = 80.0,
        seed: int = 0,
        fs: float = 5000.0,
        reporting_rate: float = 50.0,
        pll: PllConfig | None = None,
        profile: EstimatorConfig | None = None
) -> UflsResult:
    """
    Simulate an outage under a relay scheme and measurement chain.

    Parameters
    ----------
    grid : GridModel
        Dynamics, loads, outages and horizon
    scheme : RelayScheme
        Relay configuration
    source : MeasurementSource
        Chain feeding the relay
    snr_db : float
        Noise on the synthesized bus voltage, NOISE_DISABLED for none
    seed : int
        Noise seed
    fs : float
        Sampling rate of the bus voltage
    reporting_rate : float
        Measurement and trajectory rate
    pll : PllConfig or None
        PLL gains for the PLL source
    profile : EstimatorConfig or None
        Estimator override for PMU sources

    Returns
    ----------
    UflsResult
        Trajectory on the reporting grid, events, blackout and EENS.

    Raises
    ----------
    SimulationConfigError
        If the grid, scheme or rates are inconsistent.
    """
    validate_grid(grid)
    relay = get_relay(scheme, grid)
    steps_per_report, samples_per_report = _validate_rates(grid, fs, reporting_rate)
    chain = MeasurementChain(source, grid, fs, reporting_rate, pll, profile)
    noise = noise_generator(seed)
    sigma = 0.0 if snr_db == NOISE_DISABLED else math.sqrt(0.5 / 10 ** (snr_db / 10))
    reports = int(round((grid.t_stop - grid.t_start) * reporting_rate))
    logger.info(
        f"UFLS run: {source} with {scheme.kind} relay over "
        f"[{grid.t_start}, {grid.t_stop}] s, SNR {snr_db} dB"
    )

    scheduled = grid.scheduled_load
    ledger = _Ledger(
        remaining=sorted(grid.load_blocks, key=lambda b: b.priority),
        restoration_delay=grid.restoration_delay,
    )
    outages = sorted(grid.outages, key=lambda o: o.t)
    restorations: list[tuple[float, float]] = []
    orders: list[ShedOrder] = []
    state = UflsState(
        t=grid.t_start, freq=grid.f0, generation_mw=scheduled, served_mw=scheduled
    )
    phase = 0.0
    blackout_time = None
    rows = [(grid.t_start, state.freq, scheduled, 0.0, math.nan)]
    step = 0

    for report in range(1, reports + 1):
        fine_t = [state.t]
        fine_f = [state.freq]
        for _ in range(steps_per_report):
            while outages and outages[0].t <= state.t + _TIME_TOLERANCE:
                outage = outages.pop(0)
                state.generation_mw -= outage.delta_mw
                ledger.events.append(SheddingEvent(
                    t=state.t, kind=ShedEventKind.OUTAGE, mw=outage.delta_mw
                ))
                logger.info(f"Outage of {outage.delta_mw:.0f} MW at {state.t:.4f} s")
                if grid.restoration_delay is not None:
                    restorations.append((state.t + grid.restoration_delay, outage.delta_mw))
            while (not state.blackout and restorations
                   and restorations[0][0] <= state.t + _TIME_TOLERANCE):
                _, mw = restorations.pop(0)
                state.generation_mw += mw
                ledger.events.append(SheddingEvent(
                    t=state.t, kind=ShedEventKind.RESTORE, mw=mw
                ))
                logger.info(f"Restored {mw:.0f} MW of generation at {state.t:.4f} s")
            if not state.blackout:
                ledger.reconnect(state.t)
            due = [o for o in orders if o.breaker_at <= state.t + _TIME_TOLERANCE]
            orders = [o for o in orders if o not in due]
            for order in due:
                if not state.blackout:
                    ledger.shed(state.t, order.mw)
            if not state.blackout:
                state.served_mw = ledger.connected_mw
            imbalance = (state.generation_mw - state.served_mw) / grid.base_power
            step += 1
            state = replace(
                step_dynamics(state, imbalance, grid.dt, grid),
                t=grid.t_start + step * grid.dt,
            )
            if state.blackout and blackout_time is None:
                blackout_time = state.t
                state.served_mw = 0.0
                ledger.events.append(SheddingEvent(
                    t=state.t, kind=ShedEventKind.BLACKOUT, mw=ledger.connected_mw
                ))
                logger.warning(f"Grid collapsed at {state.t:.4f} s")
            fine_t.append(state.t)
            fine_f.append(state.freq)
        t_report = grid.t_start + report / reporting_rate
        if state.blackout:
            rows.append((t_report, math.nan, 0.0, scheduled - ledger.connected_mw, math.nan))
            continue
        sample_t = fine_t[0] + np.arange(samples_per_report) / fs
        sample_f = np.interp(sample_t, fine_t, fine_f)
        phases = phase + 2 * np.pi * np.concatenate(([0.0], np.cumsum(sample_f[:-1]))) / fs
        phase = float((phases[-1] + 2 * np.pi * sample_f[-1] / fs) % (2 * np.pi))
        block = np.cos(phases)
        for tone in grid.bus_tones:
            block = block + tone.amplitude * np.cos(2 * np.pi * tone.freq * sample_t)
        if sigma:
            block = block + noise.normal(0.0, sigma, samples_per_report)
        imbalance = (state.generation_mw - state.served_mw) / grid.base_power
        measurement = chain.measure(t_report, block, state, imbalance)
        if chain.loop is not None and chain.loop.loss_of_lock and not any(
                e.kind is ShedEventKind.LOSS_OF_LOCK for e in ledger.events):
            ledger.events.append(SheddingEvent(
                t=chain.loop.lock_lost_at, kind=ShedEventKind.LOSS_OF_LOCK, mw=0.0
            ))
        orders.extend(relay.update(measurement))
        rows.append((
            t_report, state.freq, state.served_mw,
            scheduled - ledger.connected_mw, measurement.freq
        ))

    t, freq, served, shed, measured = (np.array(column) for column in zip(*rows))
    eens = float(np.trapezoid(scheduled - served, t)) / _SECONDS_PER_HOUR
    logger.info(
        f"UFLS run finished: blackout={blackout_time is not None}, "
        f"EENS={eens:.3f} MWh"
    )
    return UflsResult(
        source=source,
        scheme=scheme.kind,
        t=t,
        freq=freq,
        served_mw=served,
        shed_mw=shed,
        measured=measured,
        events=tuple(sorted(ledger.events, key=lambda e: e.t)),
        blackout=blackout_time is not None,
        blackout_time=blackout_time,
        eens_mwh=eens,
    )
