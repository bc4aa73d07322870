from dataclasses import dataclass, field
from pathlib import Path

from rocofbench.application.dtos.run_config import RunConfig
from rocofbench.domain.entities import NrmseReport, QualityReport, ScoredStream
from rocofbench.domain.enums import Algorithm, PerformanceClass, RocofMode


@dataclass(frozen=True)
class ComboResult:
    """
    Data transfer object for one scored (algorithm, class, mode) run.
    """
    algorithm: Algorithm
    performance_class: PerformanceClass
    rocof_mode: RocofMode
    scored: ScoredStream
    segments: dict[str, NrmseReport] = field(default_factory=dict)
    threshold_ppm: float | None = None

    @property
    def key(self) -> tuple[Algorithm, RocofMode, PerformanceClass]:
        return self.algorithm, self.rocof_mode, self.performance_class

    @property
    def slug(self) -> str:
        return (
            f"{self.algorithm.value}_{self.performance_class.value}_"
            f"{self.rocof_mode.value}"
        )


@dataclass(frozen=True)
class ReportBundle:
    """
    Data transfer object for a dataset run.

    Contains the scored combinations, the record quality figures, the
    plain-text summary and the files written.
    """
    config: RunConfig
    combos: tuple[ComboResult, ...]
    quality: QualityReport | None
    summary: str
    files: tuple[Path, ...] = ()
