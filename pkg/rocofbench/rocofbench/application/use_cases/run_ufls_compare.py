from dataclasses import fields, replace

from loguru import logger

from rocofbench.application.dtos.run_config import RunConfig
from rocofbench.application.dtos.ufls_comparison import UflsComparison
from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.application.ports.result_writer import ResultWriterPort
from rocofbench.application.services import report, scenarios
from rocofbench.application.services.uflsim.simulation import run_ufls
from rocofbench.domain.enums import MeasurementSource, RelayKind
from rocofbench.domain.grid import (
    BusTone,
    GridModel,
    OutageEvent,
    PllConfig,
    RelayScheme,
    UflsResult,
)

_GRID_SCALARS = {
    "f0", "H", "D", "base_power", "f_collapse", "t_start", "t_stop", "dt",
    "restoration_delay",
}
_OUTAGE_KEYS = {"outage_mw", "outage_t"}
_TONE_KEYS = {"interharmonic_hz", "interharmonic_amplitude"}
_SCHEME_SCALARS = {
    f.name for f in fields(RelayScheme) if f.name not in ("kind", "stages")
}
_PLL_KEYS = {"kp", "ki"}

RUNS = {
    "pll": (MeasurementSource.PLL, RelayKind.FREQUENCY_STAGED),
    "pmu_1": (MeasurementSource.PMU_1, RelayKind.ROCOF_PROPORTIONAL),
    "pmu_2": (MeasurementSource.PMU_2, RelayKind.ROCOF_PROPORTIONAL),
    "ideal": (MeasurementSource.IDEAL, RelayKind.ROCOF_PROPORTIONAL),
}


def _reject_unknown(overrides: dict, allowed: set[str], section: str) -> None:
    unknown = sorted(set(overrides) - allowed)
    if unknown:
        message = f"Unknown {section} key(s) {unknown}; allowed: {sorted(allowed)}."
        logger.error(message)
        raise SimulationConfigError(message)


def build_grid(overrides: dict, H: float | None = None) -> GridModel:
    """
    Default surrogate grid with scalar, outage and bus interharmonic
    overrides applied; an outage of 0 MW or an interharmonic amplitude
    of 0 removes the event or the tone.
    """
    _reject_unknown(overrides, _GRID_SCALARS | _OUTAGE_KEYS | _TONE_KEYS, "grid")
    grid = scenarios.ufls_grid()
    scalars = {k: v for k, v in overrides.items() if k in _GRID_SCALARS}
    grid = replace(grid, **scalars)
    if _OUTAGE_KEYS & set(overrides):
        outage = grid.outages[0]
        mw = overrides.get("outage_mw", outage.delta_mw)
        t = overrides.get("outage_t", outage.t)
        grid = replace(grid, outages=(OutageEvent(t=t, delta_mw=mw),) if mw else ())
    if _TONE_KEYS & set(overrides):
        tone = grid.bus_tones[0]
        freq = overrides.get("interharmonic_hz", tone.freq)
        amplitude = overrides.get("interharmonic_amplitude", tone.amplitude)
        tones = (BusTone(freq=freq, amplitude=amplitude),) if amplitude else ()
        grid = replace(grid, bus_tones=tones)
    if H is not None:
        grid = replace(grid, H=H)
    return grid


def build_schemes(overrides: dict) -> dict[RelayKind, RelayScheme]:
    """
    Default relay schemes with per-kind overrides, e.g.
    {"rocof_proportional": {"pickup_delay": 0.1}}.
    """
    _reject_unknown(overrides, {kind.value for kind in RelayKind}, "relay")
    schemes = {
        RelayKind.FREQUENCY_STAGED: scenarios.frequency_staged_scheme(),
        RelayKind.ROCOF_PROPORTIONAL: scenarios.rocof_scheme(),
    }
    for kind, scheme in schemes.items():
        changes = dict(overrides.get(kind.value, {}))
        _reject_unknown(changes, _SCHEME_SCALARS, f"relay.{kind.value}")
        schemes[kind] = replace(scheme, **changes)
    return schemes


class RunUflsCompareUseCase:
    """
    Use case for the load-shedding comparison.
    Runs the PLL frequency-staged chain, both PMU ROCOF chains and the
    noiseless ROCOF chain on the same outage and reports blackout flags
    and EENS.
    """
    def __init__(self, writer: ResultWriterPort) -> None:
        """
        Initialize the use case with a result writer.

        Parameters
        ----------
        writer : ResultWriterPort
            Output adapter
        """
        self.writer = writer

    def execute(self, cfg: RunConfig) -> UflsComparison:
        """
        Execute the comparison and the optional inertia sweep.

        Parameters
        ----------
        cfg : RunConfig
            Run configuration with grid, relay and measurement overrides

        Returns
        ----------
        UflsComparison
            Results per run label, EENS sweep and summary text
        """
        _reject_unknown(cfg.measurement_overrides, _PLL_KEYS, "measurement")
        schemes = build_schemes(cfg.relay_overrides)
        pll = PllConfig(fs=cfg.fs, f0=cfg.f_nominal, **cfg.measurement_overrides)
        snr = scenarios.UFLS_SNR_DB if cfg.snr_db is None else cfg.snr_db
        grid = build_grid(cfg.grid_overrides)
        results = self._run_all(grid, schemes, pll, snr, cfg)
        sweep = {}
        for H in cfg.sweep_H:
            logger.info(f"Sweep run with H={H} s")
            swept = self._run_all(build_grid(cfg.grid_overrides, H), schemes, pll, snr, cfg)
            sweep[H] = {label: result.eens_mwh for label, result in swept.items()}
        run_dir = cfg.output_dir / cfg.dataset.value
        self.writer.prepare(run_dir)
        metadata = cfg.echo()
        files = []
        for label, result in results.items():
            run_metadata = {**metadata, "run": label}
            files.append(self.writer.write_trajectory(
                result, f"trajectory_{label}.csv", run_metadata
            ))
            files.append(self.writer.write_events(
                result, f"events_{label}.csv", run_metadata
            ))
        summary = report.ufls_summary(results, sweep)
        files.append(self.writer.write_text(summary, "summary.txt", metadata))
        comparison = UflsComparison(
            config=cfg, results=results, summary=summary,
            sweep=sweep, files=tuple(files),
        )
        blackouts = {label: r.blackout for label, r in results.items()}
        logger.info(
            f"UFLS comparison finished: blackouts {blackouts}, "
            f"EENS ordering holds: {comparison.eens_ordering_holds}, "
            f"ideal lower bound: {comparison.ideal_is_lower_bound}"
        )
        return comparison

    def _run_all(self, grid, schemes, pll, snr, cfg) -> dict[str, UflsResult]:
        return {
            label: run_ufls(
                grid, schemes[kind], source, snr_db=snr, seed=cfg.seed,
                fs=cfg.fs, reporting_rate=cfg.reporting_rate, pll=pll,
            )
            for label, (source, kind) in RUNS.items()
        }
