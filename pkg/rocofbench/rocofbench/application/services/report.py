"""
Plain-text summaries with the measured figures beside the published ones.
"""
import math

from rocofbench.application.dtos.report_bundle import ComboResult
from rocofbench.application.services.scenarios import (
    COMBINATION_LABELS,
    PUBLISHED_DATASET1,
    PUBLISHED_DATASET2,
    PUBLISHED_NRMSE,
    PUBLISHED_TRANSIENT_NRMSE,
    RFE_LIMITS,
    STEADY_STATE_LIMIT,
)
from rocofbench.domain.entities import QualityReport
from rocofbench.domain.enums import DatasetName, PerformanceClass
from rocofbench.domain.grid import UflsResult

PUBLISHED_RFE = {
    DatasetName.DATASET1: PUBLISHED_DATASET1,
    DatasetName.DATASET2: PUBLISHED_DATASET2,
}
_COLUMN = 18


def _number(value: float | None, digits: int = 3) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    if math.isinf(value):
        return "inf"
    if value != 0 and (abs(value) < 10 ** -digits or abs(value) >= 1e4):
        return f"{value:.2e}"
    return f"{value:.{digits}f}"


def _pair(measured: float | None, published: float | None) -> str:
    if published is None:
        return _number(measured)
    return f"{_number(measured)} ({_number(published, 2)})"


def _limit(dataset: DatasetName, performance_class: PerformanceClass) -> str:
    key = (dataset.value, performance_class)
    if key not in RFE_LIMITS:
        return f"{STEADY_STATE_LIMIT} (steady)"
    limit = RFE_LIMITS[key]
    return "suspended" if limit is None else f"{limit}"


def stats_rows(dataset: DatasetName, combos: list[ComboResult]) -> list[dict]:
    """
    One statistics row per combination, published values alongside.
    """
    published = PUBLISHED_RFE.get(dataset, {})
    rows = []
    for combo in combos:
        stats = combo.scored.stats
        reference = published.get(combo.key)
        rows.append({
            "algorithm": combo.algorithm.value,
            "class": combo.performance_class.value,
            "rocof_mode": combo.rocof_mode.value,
            "mean": stats.mean,
            "std": stats.std,
            "p95": stats.p95_abs,
            "pearson": stats.pearson if stats.pearson_defined else "undefined",
            "n": stats.n,
            "published_p95": reference.p95 if reference else "",
            "published_pearson": reference.pearson if reference else "",
        })
    return rows


def nrmse_rows(combos: list[ComboResult]) -> list[dict]:
    rows = []
    for combo in combos:
        for label, report in combo.segments.items():
            reference = PUBLISHED_NRMSE.get((label, combo.performance_class))
            rows.append({
                "algorithm": combo.algorithm.value,
                "class": combo.performance_class.value,
                "rocof_mode": combo.rocof_mode.value,
                "segment": label,
                "mean": report.mean,
                "std": report.std,
                "max": report.max,
                "published_mean": reference.mean if reference else "",
                "published_max": reference.max if reference else "",
            })
    return rows


def rfe_table(dataset: DatasetName, combos: list[ComboResult]) -> str:
    """
    95th percentile of |RFE| per class and estimator, published value
    in brackets, requirement in the last column.
    """
    published = PUBLISHED_RFE.get(dataset, {})
    labels = list(dict.fromkeys(
        COMBINATION_LABELS[(c.algorithm, c.rocof_mode)] for c in combos
    ))
    header = "class".ljust(8) + "".join(label.ljust(_COLUMN) for label in labels)
    lines = ["RFE 95th percentile [Hz/s], published value in brackets", header + "limit"]
    for performance_class in PerformanceClass:
        row = {
            COMBINATION_LABELS[(c.algorithm, c.rocof_mode)]: c
            for c in combos if c.performance_class is performance_class
        }
        if not row:
            continue
        cells = []
        for label in labels:
            combo = row.get(label)
            if combo is None:
                cells.append("-".ljust(_COLUMN))
                continue
            reference = published.get(combo.key)
            cells.append(_pair(
                combo.scored.stats.p95_abs, reference.p95 if reference else None
            ).ljust(_COLUMN))
        lines.append(
            performance_class.value.ljust(8) + "".join(cells)
            + _limit(dataset, performance_class)
        )
    return "\n".join(lines)


def nrmse_table(combos: list[ComboResult]) -> str:
    lines = ["nRMSE [ppm]: mean / max per segment, published value in brackets"]
    for combo in combos:
        label = COMBINATION_LABELS[(combo.algorithm, combo.rocof_mode)]
        parts = []
        for segment, report in combo.segments.items():
            reference = PUBLISHED_NRMSE.get((segment, combo.performance_class))
            parts.append(
                f"{segment} {_pair(report.mean, reference.mean if reference else None)}"
                f" / {_pair(report.max, reference.max if reference else None)}"
            )
        transient = ""
        if combo.scored.nrmse is not None:
            transient = _pair(
                combo.scored.nrmse.max, PUBLISHED_TRANSIENT_NRMSE.get(combo.key)
            )
        flagged = int(combo.scored.transient_flags.sum())
        lines.append(
            f"{label} class {combo.performance_class.value}: "
            + "; ".join(parts)
            + f"; record max {transient}; flagged windows {flagged}"
        )
    return "\n".join(lines)


def dataset_summary(
        dataset: DatasetName,
        combos: list[ComboResult],
        quality: QualityReport | None
) -> str:
    """
    Full plain-text summary of a dataset run.
    """
    sections = [f"ROCOF estimation accuracy: {dataset.value}"]
    if quality is not None:
        sections.append(
            f"record quality: SNR {_number(quality.snr_db, 2)} dB, "
            f"THD {_number(quality.thd_pct, 2)} %, "
            f"SINAD {_number(quality.sinad_db, 2)} dB"
        )
    sections.append(rfe_table(dataset, combos))
    if any(c.segments for c in combos):
        sections.append(nrmse_table(combos))
    return "\n\n".join(sections) + "\n"


def ufls_summary(
        results: dict[str, UflsResult],
        sweep: dict[float, dict[str, float]]
) -> str:
    """
    One line per measurement chain and, for a sweep, EENS per inertia.
    """
    lines = ["label,source,scheme,blackout,blackout_time,shed_mw,eens_mwh"]
    for label, result in results.items():
        lines.append(
            f"{label},{result.source.value},{result.scheme.value},"
            f"{str(result.blackout).lower()},{_number(result.blackout_time)},"
            f"{result.total_shed_mw:.0f},{result.eens_mwh:.4f}"
        )
    first, second = results.get("pmu_1"), results.get("pmu_2")
    if first is not None and second is not None:
        relation = "<" if second.eens_mwh < first.eens_mwh else ">="
        lines.append(
            f"EENS pmu_2 {second.eens_mwh:.4f} {relation} "
            f"pmu_1 {first.eens_mwh:.4f} MWh"
        )
    ideal = results.get("ideal")
    if ideal is not None:
        pmus = [r.eens_mwh for label, r in results.items() if label.startswith("pmu")]
        if pmus:
            relation = "<=" if ideal.eens_mwh <= min(pmus) + 1e-9 else ">"
            lines.append(
                f"EENS ideal {ideal.eens_mwh:.4f} {relation} "
                f"best pmu {min(pmus):.4f} MWh"
            )
    if sweep:
        lines.append("")
        lines.append("H," + ",".join(next(iter(sweep.values())).keys()))
        for H, eens in sweep.items():
            lines.append(f"{H}," + ",".join(f"{v:.4f}" for v in eens.values()))
    return "\n".join(lines) + "\n"
