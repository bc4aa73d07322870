"""
Scenario file loader.

A scenario is a TOML file with optional sections:

    [run]          algorithms, classes, rocof_modes, seed, output_dir, fs,
                   reporting_rate, f_nominal, reference_source,
                   transient_margin, waveform, reference, export_waveform
    [noise]        snr_db, seed
    [model]        dataset model overrides
    [estimator]    estimator tuning overrides
    [grid]         surrogate grid overrides, sweep_H
    [relay]        relay scheme overrides per relay kind
    [measurement]  PLL gains

Keys of [model], [estimator], [grid], [relay] and [measurement] are
checked by the use case that consumes them.
"""
import tomllib
from dataclasses import replace
from enum import StrEnum
from pathlib import Path
from typing import Iterable, NoReturn

from loguru import logger

from rocofbench.application.dtos.run_config import RunConfig
from rocofbench.application.ports.exceptions.base import ConfigurationError
from rocofbench.config.settings import settings
from rocofbench.domain.enums import (
    Algorithm,
    DatasetName,
    PerformanceClass,
    ReferenceSource,
    RocofMode,
)

SECTIONS = {"run", "noise", "model", "estimator", "grid", "relay", "measurement"}
RUN_KEYS = {
    "algorithms", "classes", "rocof_modes", "seed", "output_dir", "fs",
    "reporting_rate", "f_nominal", "reference_source", "transient_margin",
    "waveform", "reference", "export_waveform",
}
NOISE_KEYS = {"snr_db", "seed"}


def _fail(message: str) -> NoReturn:
    logger.error(message)
    raise ConfigurationError(message)


def _enum_values(enum: type[StrEnum], values: Iterable[str] | str) -> tuple:
    if isinstance(values, str):
        values = values.split(",")
    parsed = []
    for value in values:
        text = str(value).strip()
        if enum is not PerformanceClass:
            text = text.lower().replace("-", "_")
        try:
            parsed.append(enum(text))
        except ValueError:
            _fail(
                f"Unknown {enum.__name__} '{value}'; "
                f"allowed: {[member.value for member in enum]}."
            )
    if not parsed:
        _fail(f"Empty {enum.__name__} selection.")
    return tuple(dict.fromkeys(parsed))


def parse_algorithms(values: Iterable[str] | str) -> tuple[Algorithm, ...]:
    return _enum_values(Algorithm, values)


def parse_classes(values: Iterable[str] | str) -> tuple[PerformanceClass, ...]:
    return _enum_values(PerformanceClass, values)


def parse_modes(values: Iterable[str] | str) -> tuple[RocofMode, ...]:
    return _enum_values(RocofMode, values)


def load_scenario(path: Path) -> dict[str, dict]:
    """
    Read and validate a scenario file.

    Parameters
    ----------
    path : Path
        TOML scenario file

    Returns
    ----------
    dict[str, dict]
        Section name to its table, every known section present

    Raises
    ----------
    ConfigurationError
        If the file cannot be read or parsed, or holds an unknown
        section or an unknown [run] or [noise] key.
    """
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except OSError as e:
        _fail(f"Cannot read scenario file {path}: {e}")
    except tomllib.TOMLDecodeError as e:
        _fail(f"Scenario file {path} is not valid TOML: {e}")
    unknown = sorted(set(raw) - SECTIONS)
    if unknown:
        _fail(f"Unknown scenario section(s) {unknown}; allowed: {sorted(SECTIONS)}.")
    for name, table in raw.items():
        if not isinstance(table, dict):
            _fail(f"Scenario entry '{name}' must be a section.")
    for name, allowed in (("run", RUN_KEYS), ("noise", NOISE_KEYS)):
        unknown = sorted(set(raw.get(name, {})) - allowed)
        if unknown:
            _fail(f"Unknown [{name}] key(s) {unknown}; allowed: {sorted(allowed)}.")
    logger.debug(f"Loaded scenario {path} with sections {sorted(raw)}")
    return {name: dict(raw.get(name, {})) for name in sorted(SECTIONS)}


def build_run_config(
        dataset: DatasetName,
        scenario: dict[str, dict] | None = None,
        **overrides
) -> RunConfig:
    """
    Resolve a run configuration from settings, a scenario and command
    line overrides, later sources winning. None overrides are ignored.

    Parameters
    ----------
    dataset : DatasetName
        Scenario to run
    scenario : dict[str, dict] | None
        Sections returned by load_scenario
    **overrides
        RunConfig fields given on the command line

    Returns
    ----------
    RunConfig
        Resolved configuration

    Raises
    ----------
    ConfigurationError
        If a value cannot be converted to its field type.
    """
    scenario = scenario or {}
    run = dict(scenario.get("run", {}))
    noise = dict(scenario.get("noise", {}))
    grid = dict(scenario.get("grid", {}))
    cfg = RunConfig(
        dataset=dataset,
        seed=settings.DEFAULT_SEED,
        output_dir=settings.OUTPUT_DIR,
        fs=settings.SAMPLING_RATE,
        reporting_rate=settings.REPORTING_RATE,
        f_nominal=settings.NOMINAL_FREQUENCY,
    )
    fields = {}
    try:
        if "algorithms" in run:
            fields["algorithms"] = parse_algorithms(run["algorithms"])
        if "classes" in run:
            fields["classes"] = parse_classes(run["classes"])
        if "rocof_modes" in run:
            fields["rocof_modes"] = parse_modes(run["rocof_modes"])
        for key in ("fs", "reporting_rate", "f_nominal", "transient_margin"):
            if key in run:
                fields[key] = float(run[key])
        if "seed" in run:
            fields["seed"] = int(run["seed"])
        if "seed" in noise:
            fields["seed"] = int(noise["seed"])
        if "snr_db" in noise:
            fields["snr_db"] = float(noise["snr_db"])
        if "output_dir" in run:
            fields["output_dir"] = Path(run["output_dir"])
        if "reference_source" in run:
            fields["reference_source"] = ReferenceSource(run["reference_source"])
        if "waveform" in run:
            fields["waveform_path"] = Path(run["waveform"])
        if "reference" in run:
            fields["reference_path"] = Path(run["reference"])
        if "export_waveform" in run:
            fields["export_waveform"] = bool(run["export_waveform"])
        if "sweep_H" in grid:
            fields["sweep_H"] = tuple(float(h) for h in grid.pop("sweep_H"))
    except (TypeError, ValueError) as e:
        _fail(f"Invalid scenario value: {e}")
    fields.update(
        model_overrides=dict(scenario.get("model", {})),
        estimator_overrides=dict(scenario.get("estimator", {})),
        grid_overrides=grid,
        relay_overrides=dict(scenario.get("relay", {})),
        measurement_overrides=dict(scenario.get("measurement", {})),
    )
    fields.update({key: value for key, value in overrides.items() if value is not None})
    cfg = replace(cfg, **fields)
    if not cfg.algorithms or not cfg.classes:
        _fail("At least one algorithm and one class must be selected.")
    logger.debug(f"Resolved run configuration {cfg.echo()}")
    return cfg
