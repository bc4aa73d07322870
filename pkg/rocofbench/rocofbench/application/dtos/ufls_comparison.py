import math
from dataclasses import dataclass, field
from pathlib import Path

from rocofbench.application.dtos.run_config import RunConfig
from rocofbench.domain.grid import UflsResult


@dataclass(frozen=True)
class UflsComparison:
    """
    Data transfer object for the load-shedding comparison.

    sweep maps each inertia constant to the EENS (MWh) per run label.
    """
    config: RunConfig
    results: dict[str, UflsResult]
    summary: str
    sweep: dict[float, dict[str, float]] = field(default_factory=dict)
    files: tuple[Path, ...] = ()

    @property
    def eens_ordering_holds(self) -> bool:
        first, second = self.results.get("pmu_1"), self.results.get("pmu_2")
        if first is None or second is None:
            return False
        return second.eens_mwh < first.eens_mwh

    @property
    def ideal_is_lower_bound(self) -> bool:
        """
        Whether the noiseless chain needs no more energy than any PMU chain.
        """
        ideal = self.results.get("ideal")
        pmus = [self.results.get(label) for label in ("pmu_1", "pmu_2")]
        if ideal is None or None in pmus:
            return False
        return all(
            ideal.eens_mwh < pmu.eens_mwh
            or math.isclose(ideal.eens_mwh, pmu.eens_mwh, rel_tol=1e-9, abs_tol=1e-12)
            for pmu in pmus
        )
