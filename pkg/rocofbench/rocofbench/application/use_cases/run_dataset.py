from dataclasses import dataclass, fields
from typing import Callable

import numpy as np
from loguru import logger

from rocofbench.application.dtos.report_bundle import ComboResult, ReportBundle
from rocofbench.application.dtos.run_config import RunConfig
from rocofbench.application.ports.exceptions.estimation import (
    EstimatorConfigError,
)
from rocofbench.application.ports.exceptions.output import UnknownDataset
from rocofbench.application.ports.exceptions.signal import InvalidSignalModel
from rocofbench.application.ports.record_reader import RecordReaderPort
from rocofbench.application.ports.result_writer import ResultWriterPort
from rocofbench.application.services import metrics, report, scenarios, truth
from rocofbench.application.services.estimators import estimate_stream
from rocofbench.application.services.spectrogram import spectrogram
from rocofbench.application.services.wavegen import (
    add_noise,
    measure_quality,
    synth_multitone,
    synth_oscillation,
    synth_step,
)
from rocofbench.domain.entities import (
    EstimatorConfig,
    QualityReport,
    ReferenceSeries,
    Waveform,
)
from rocofbench.domain.enums import (
    DatasetName,
    PerformanceClass,
    RampPhaseConvention,
)

ReferenceBuilder = Callable[[np.ndarray], ReferenceSeries]

_DATASET1_KEYS = {"system_freq", "amplitude", "duration"}
_DATASET2_KEYS = {
    "A", "f", "phi", "k_A", "f_A", "k_phi", "f_phi", "phase_convention"
}
_DATASET3_KEYS = {"thd_pct", "t_step", "duration"}
_ESTIMATOR_FIXED = {"algorithm", "window_cycles", "fs", "f_nominal",
                    "reporting_rate", "rocof_mode"}


@dataclass(frozen=True)
class _Record:
    waveform: Waveform
    reference: ReferenceBuilder
    quality: QualityReport | None = None
    t_step: float | None = None


def _check_overrides(
        overrides: dict,
        allowed: set[str],
        section: str,
        error: type[Exception] = InvalidSignalModel
) -> None:
    unknown = sorted(set(overrides) - allowed)
    if unknown:
        message = (
            f"Unknown {section} override(s) {unknown}; "
            f"allowed: {sorted(allowed)}."
        )
        logger.error(message)
        raise error(message)


def interpolated_reference(reference: ReferenceSeries, t: np.ndarray) -> ReferenceSeries:
    """
    Reference resampled onto estimate instants.
    """
    freq = np.interp(t, reference.t, reference.freq)
    rocof = np.interp(t, reference.t, reference.rocof)
    rocof_fd = np.full(len(t), np.nan)
    if len(t) > 1:
        rocof_fd = truth.rocof_reference(freq, float(t[1] - t[0]))
    return ReferenceSeries(
        t=np.asarray(t, dtype=float), freq=freq, rocof=rocof,
        rocof_fd=rocof_fd, source=reference.source,
    )


class RunDatasetUseCase:
    """
    Use case for dataset experiments.
    Synthesizes or reads the record, runs every estimator combination,
    scores it against the reference and writes the report bundle.
    """
    def __init__(self, writer: ResultWriterPort, reader: RecordReaderPort) -> None:
        """
        Initialize the use case with its ports.

        Parameters
        ----------
        writer : ResultWriterPort
            Output adapter
        reader : RecordReaderPort
            Input adapter for recorded waveforms
        """
        self.writer = writer
        self.reader = reader

    def execute(self, cfg: RunConfig) -> ReportBundle:
        """
        Execute the dataset run.

        Parameters
        ----------
        cfg : RunConfig
            Run configuration

        Returns
        ----------
        ReportBundle
            Scored combinations, summary text and written files

        Raises
        ----------
        UnknownDataset
            If the dataset has no estimator experiment.
        """
        if not cfg.algorithms or not cfg.classes:
            message = "At least one algorithm and one class must be selected."
            logger.error(message)
            raise EstimatorConfigError(message)
        record = self._record(cfg)
        run_dir = cfg.output_dir / cfg.dataset.value
        self.writer.prepare(run_dir)
        metadata = cfg.echo()
        files = []
        if cfg.export_waveform:
            files.append(self.writer.write_waveform(
                record.waveform, "waveform.csv", metadata
            ))
        combos = []
        references_written: set[PerformanceClass] = set()
        for algorithm, performance_class, mode in cfg.combinations():
            estimator_cfg = self._estimator_config(
                cfg, algorithm, performance_class, mode, record.waveform.fs
            )
            stream = estimate_stream(record.waveform, estimator_cfg)
            reference = record.reference(stream.t)
            combo = self._score(stream, reference, record, cfg, algorithm, performance_class, mode)
            combos.append(combo)
            combo_metadata = {**metadata, "combination": combo.slug}
            files.append(self.writer.write_stream(
                stream, f"stream_{combo.slug}.csv", combo_metadata
            ))
            files.append(self.writer.write_cdf(
                combo.scored.cdf, f"cdf_{combo.slug}.csv", combo_metadata
            ))
            if performance_class not in references_written:
                references_written.add(performance_class)
                files.append(self.writer.write_reference(
                    reference, f"reference_{performance_class.value}.csv",
                    {**metadata, "class": performance_class.value},
                ))
            logger.info(
                f"{combo.slug}: p95 {combo.scored.stats.p95_abs:.4f} Hz/s, "
                f"pearson {combo.scored.stats.pearson}"
            )
        files.append(self.writer.write_rows(
            report.stats_rows(cfg.dataset, combos),
            ["algorithm", "class", "rocof_mode", "mean", "std", "p95",
             "pearson", "n", "published_p95", "published_pearson"],
            "stats.csv", metadata,
        ))
        if record.t_step is not None:
            files.append(self.writer.write_rows(
                report.nrmse_rows(combos),
                ["algorithm", "class", "rocof_mode", "segment", "mean", "std",
                 "max", "published_mean", "published_max"],
                "nrmse.csv", metadata,
            ))
            f, t, magnitude = spectrogram(record.waveform)
            files.append(self.writer.write_spectrogram(
                t, f, magnitude, "spectrogram.csv", metadata
            ))
        summary = report.dataset_summary(cfg.dataset, combos, record.quality)
        files.append(self.writer.write_text(summary, "summary.txt", metadata))
        logger.info(f"Dataset {cfg.dataset} finished, {len(files)} files written")
        return ReportBundle(
            config=cfg, combos=tuple(combos), quality=record.quality,
            summary=summary, files=tuple(files),
        )

    def _estimator_config(self, cfg, algorithm, performance_class, mode, fs) -> EstimatorConfig:
        tunables = {f.name for f in fields(EstimatorConfig)} - _ESTIMATOR_FIXED
        _check_overrides(
            cfg.estimator_overrides, tunables, "estimator", EstimatorConfigError
        )
        overrides = dict(cfg.estimator_overrides)
        if "passband" in overrides:
            overrides["passband"] = tuple(overrides["passband"])
        return EstimatorConfig(
            algorithm=algorithm,
            window_cycles=performance_class.window_cycles,
            fs=fs,
            f_nominal=cfg.f_nominal,
            reporting_rate=cfg.reporting_rate,
            rocof_mode=mode,
            **overrides,
        )

    def _score(self, stream, reference, record, cfg, algorithm, performance_class, mode) -> ComboResult:
        if record.t_step is None:
            return ComboResult(
                algorithm=algorithm, performance_class=performance_class,
                rocof_mode=mode, scored=metrics.score_stream(stream, reference),
            )
        segments = metrics.characterise_nrmse(
            stream.nrmse, stream.t, scenarios.dataset3_segments(record.t_step),
            half_window=stream.config.window_seconds / 2,
        )
        threshold = metrics.calibrate_threshold(
            segments["pre-islanding"], cfg.transient_margin
        )
        return ComboResult(
            algorithm=algorithm, performance_class=performance_class,
            rocof_mode=mode,
            scored=metrics.score_stream(stream, reference, threshold),
            segments=segments, threshold_ppm=threshold,
        )

    def _record(self, cfg: RunConfig) -> _Record:
        builders = {
            DatasetName.DATASET1: self._dataset1,
            DatasetName.DATASET2: self._dataset2,
            DatasetName.DATASET3: self._dataset3,
            DatasetName.CUSTOM: self._custom,
        }
        if cfg.dataset not in builders:
            message = f"Dataset {cfg.dataset} has no estimator experiment."
            logger.error(message)
            raise UnknownDataset(message)
        logger.info(f"Preparing record for {cfg.dataset}")
        return builders[cfg.dataset](cfg)

    def _dataset1(self, cfg: RunConfig) -> _Record:
        _check_overrides(cfg.model_overrides, _DATASET1_KEYS, "model")
        overrides = dict(cfg.model_overrides)
        duration = overrides.pop("duration", scenarios.DATASET1_DURATION)
        model = scenarios.dataset1_model(
            system_freq=overrides.get("system_freq", cfg.f_nominal),
            amplitude=overrides.get("amplitude", 1.0),
        )
        snr = scenarios.DATASET1_SNR_DB if cfg.snr_db is None else cfg.snr_db
        w = add_noise(synth_multitone(model, cfg.fs, duration), snr, cfg.seed)
        return _Record(
            waveform=w,
            reference=lambda t: truth.multitone_reference(
                model, t, cfg.reference_source, cfg.fs
            ),
            quality=measure_quality(w, model.system_freq, (2, 6)),
        )

    def _dataset2(self, cfg: RunConfig) -> _Record:
        _check_overrides(cfg.model_overrides, _DATASET2_KEYS, "model")
        overrides = dict(cfg.model_overrides)
        convention = RampPhaseConvention(
            overrides.pop("phase_convention", RampPhaseConvention.INTEGRAL)
        )
        model = scenarios.dataset2_model(convention, **overrides)
        snr = scenarios.DATASET2_SNR_DB if cfg.snr_db is None else cfg.snr_db
        w = add_noise(synth_oscillation(model, cfg.fs), snr, cfg.seed)
        return _Record(
            waveform=w,
            reference=lambda t: truth.oscillation_reference(model, t),
        )

    def _dataset3(self, cfg: RunConfig) -> _Record:
        _check_overrides(cfg.model_overrides, _DATASET3_KEYS, "model")
        overrides = dict(cfg.model_overrides)
        duration = overrides.pop("duration", scenarios.DATASET3_DURATION)
        model = scenarios.dataset3_model(**overrides)
        snr = scenarios.DATASET3_SNR_DB if cfg.snr_db is None else cfg.snr_db
        w = add_noise(synth_step(model, cfg.fs, duration), snr, cfg.seed)
        return _Record(
            waveform=w,
            reference=lambda t: truth.step_reference(
                t, model.pre.frequency, model.post.frequency, model.t_step
            ),
            quality=measure_quality(w, model.pre.frequency),
            t_step=model.t_step,
        )

    def _custom(self, cfg: RunConfig) -> _Record:
        if cfg.waveform_path is None or cfg.reference_path is None:
            message = "Custom dataset needs both a waveform and a reference file."
            logger.error(message)
            raise UnknownDataset(message)
        w = self.reader.read_waveform(cfg.waveform_path)
        recorded = self.reader.read_reference(cfg.reference_path)
        return _Record(
            waveform=w,
            reference=lambda t: interpolated_reference(recorded, t),
        )
