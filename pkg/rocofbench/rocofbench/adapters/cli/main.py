"""
Command line entry point.

    rocofbench <dataset1|dataset2|dataset3|ufls|custom> [--config <toml>]
               [--out <dir>] [--seed <int>] [--algos <list>]
               [--classes <P,M>] [--modes <list>] [--snr <dB>]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
import argparse
import sys
from pathlib import Path

from loguru import logger

from rocofbench.adapters.dependencies import get_record_reader, get_result_writer
from rocofbench.application.ports.exceptions.base import (
    ConfigurationError,
    NumericalFailure,
)
from rocofbench.application.use_cases.run_dataset import RunDatasetUseCase
from rocofbench.application.use_cases.run_ufls_compare import (
    RunUflsCompareUseCase,
)
from rocofbench.config.logging import configure_logging
from rocofbench.config.scenario import (
    build_run_config,
    load_scenario,
    parse_algorithms,
    parse_classes,
    parse_modes,
)
from rocofbench.domain.enums import DatasetName

EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_NUMERICAL = 3

_DESCRIPTIONS = {
    DatasetName.DATASET1: "Harmonic and inter-harmonic distortion record.",
    DatasetName.DATASET2: "Amplitude and phase modulation with frequency ramps.",
    DatasetName.DATASET3: "Amplitude and phase step at islanding.",
    DatasetName.UFLS: "Load-shedding comparison on the surrogate grid.",
    DatasetName.CUSTOM: "Recorded waveform scored against a recorded reference.",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rocofbench",
        description="ROCOF estimation accuracy and load-shedding experiments.",
    )
    subparsers = parser.add_subparsers(dest="dataset", required=True)
    for dataset, description in _DESCRIPTIONS.items():
        sub = subparsers.add_parser(dataset.value, help=description, description=description)
        sub.add_argument("--config", type=Path, help="TOML scenario file")
        sub.add_argument("--out", type=Path, help="Output directory")
        sub.add_argument("--seed", type=int, help="Noise seed")
        sub.add_argument("--snr", type=float, help="Noise level in dB, inf disables noise")
        sub.add_argument("--verbose", action="store_true", help="Debug logging")
        if dataset is DatasetName.UFLS:
            continue
        sub.add_argument("--algos", help="Comma separated: e_ipdft,i_ipdft,tfm")
        sub.add_argument("--classes", help="Comma separated: P,M")
        sub.add_argument("--modes", help="Comma separated: finite_difference,derivative")
        if dataset is DatasetName.CUSTOM:
            sub.add_argument("--waveform", type=Path, required=True, help="Waveform CSV")
            sub.add_argument("--reference", type=Path, required=True, help="Reference CSV")
        else:
            sub.add_argument(
                "--export-waveform", action="store_true",
                help="Also write the synthesized record",
            )
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    overrides = {
        "output_dir": args.out,
        "seed": args.seed,
        "snr_db": args.snr,
    }
    for option, field, parse in (
            ("algos", "algorithms", parse_algorithms),
            ("classes", "classes", parse_classes),
            ("modes", "rocof_modes", parse_modes),
    ):
        value = getattr(args, option, None)
        if value:
            overrides[field] = parse(value)
    if getattr(args, "waveform", None) is not None:
        overrides["waveform_path"] = args.waveform
        overrides["reference_path"] = args.reference
    if getattr(args, "export_waveform", False):
        overrides["export_waveform"] = True
    return overrides


def run(args: argparse.Namespace) -> str:
    """
    Resolve the configuration and execute the selected use case.

    Parameters
    ----------
    args : argparse.Namespace
        Parsed command line

    Returns
    ----------
    str
        Plain-text summary of the run
    """
    dataset = DatasetName(args.dataset)
    scenario = load_scenario(args.config) if args.config else None
    cfg = build_run_config(dataset, scenario, **_overrides(args))
    writer = get_result_writer(cfg.output_dir)
    if dataset is DatasetName.UFLS:
        return RunUflsCompareUseCase(writer).execute(cfg).summary
    return RunDatasetUseCase(writer, get_record_reader()).execute(cfg).summary


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(level="DEBUG" if args.verbose else None)
    try:
        summary = run(args)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIGURATION
    except NumericalFailure as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    sys.stdout.write(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
