from dataclasses import dataclass, field
from pathlib import Path

from rocofbench.domain.enums import (
    Algorithm,
    DatasetName,
    PerformanceClass,
    ReferenceSource,
    RocofMode,
)


@dataclass(frozen=True)
class RunConfig:
    """
    Data transfer object for one scenario run.

    Contains the dataset selector, the estimator combinations to run
    and the overrides merged from the scenario file and the command line.
    snr_db None keeps the dataset's default noise level.
    """
    dataset: DatasetName
    algorithms: tuple[Algorithm, ...] = tuple(Algorithm)
    classes: tuple[PerformanceClass, ...] = tuple(PerformanceClass)
    rocof_modes: tuple[RocofMode, ...] = tuple(RocofMode)
    seed: int = 1
    output_dir: Path = Path("results")
    fs: float = 5000.0
    reporting_rate: float = 50.0
    f_nominal: float = 50.0
    snr_db: float | None = None
    reference_source: ReferenceSource = ReferenceSource.ANALYTIC
    transient_margin: float = 0.5
    model_overrides: dict = field(default_factory=dict)
    estimator_overrides: dict = field(default_factory=dict)
    grid_overrides: dict = field(default_factory=dict)
    relay_overrides: dict = field(default_factory=dict)
    measurement_overrides: dict = field(default_factory=dict)
    sweep_H: tuple[float, ...] = ()
    waveform_path: Path | None = None
    reference_path: Path | None = None
    export_waveform: bool = False

    def combinations(self) -> list[tuple[Algorithm, PerformanceClass, RocofMode]]:
        """
        Every (algorithm, class, mode) triple; derivative ROCOF only
        for the dynamic-model algorithm.
        """
        return [
            (algorithm, performance_class, mode)
            for algorithm in self.algorithms
            for performance_class in self.classes
            for mode in self.rocof_modes
            if mode is RocofMode.FINITE_DIFFERENCE or algorithm is Algorithm.TFM
        ]

    def echo(self) -> dict[str, str]:
        """
        Resolved configuration as flat text pairs for file metadata.
        """
        pairs = {
            "dataset": self.dataset.value,
            "algorithms": ",".join(a.value for a in self.algorithms),
            "classes": ",".join(c.value for c in self.classes),
            "rocof_modes": ",".join(m.value for m in self.rocof_modes),
            "seed": str(self.seed),
            "fs": repr(self.fs),
            "reporting_rate": repr(self.reporting_rate),
            "f_nominal": repr(self.f_nominal),
            "snr_db": "default" if self.snr_db is None else repr(self.snr_db),
            "reference_source": self.reference_source.value,
            "transient_margin": repr(self.transient_margin),
            "export_waveform": str(self.export_waveform).lower(),
        }
        for prefix, overrides in (
                ("model", self.model_overrides),
                ("estimator", self.estimator_overrides),
                ("grid", self.grid_overrides),
                ("relay", self.relay_overrides),
                ("measurement", self.measurement_overrides),
        ):
            for key in sorted(overrides):
                pairs[f"{prefix}.{key}"] = repr(overrides[key])
        if self.sweep_H:
            pairs["sweep_H"] = ",".join(repr(h) for h in self.sweep_H)
        return pairs
