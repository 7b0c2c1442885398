# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Command-line surface.

    emg_align simulate        write simulated day directories and a manifest
    emg_align train           train the classifier on day 1
    emg_align calibrate       fit the CCA mapping of one day against day 1
    emg_align evaluate        score a day with a saved model (and mapping)
    emg_align report          re-render summary.svg and embeddings
    emg_align run-experiment  the full multi-day experiment
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Optional, Sequence
import numpy as np

from emg_align.application.services.cca_alignment import calibration_subset, cca_fit, project_day
from emg_align.application.services.drift_simulator import SimulatedDaySource
from emg_align.application.services.experiment_service import ExperimentService
from emg_align.application.services.svm_classifier import (
    accuracy,
    accuracy_per_gesture,
    split_by_repetition,
    svm_predict,
    svm_train,
)
from emg_align.application.utils.diagnostics import embed_2d
from emg_align.domain.entities.experiment_config import DatasetManifest, ExperimentConfig
from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import EmgAlignError, ParameterError
from emg_align.domain.interfaces.day_source import IDaySource
from emg_align.infrastructure.config.config_loader import (
    apply_overrides,
    load_experiment_config,
    load_manifest,
    write_manifest,
)
from emg_align.infrastructure.reporting.report_writer import (
    SUMMARY_CSV,
    SUMMARY_SVG,
    emit_report,
    read_summary,
    write_embedding,
    write_run_metadata,
    write_summary_svg,
)
from emg_align.infrastructure.storage.day_csv import write_day
from emg_align.infrastructure.storage.day_sources import DirectoryDaySource
from emg_align.infrastructure.storage.model_files import load_mapping, load_model, save_mapping, save_model

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
MODEL_FILE = "model.csv"
MANIFEST_FILE = "manifest.yaml"


def mapping_file(day_index: int) -> str:
    return f"mapping_day{day_index}.csv"


def embedding_file(day_index: int) -> str:
    return f"embedding_day{day_index}.csv"


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None, help="Experiment YAML (default: shipped experiment.yaml)")
    p.add_argument("--manifest", type=Path, default=None, help="Dataset manifest; simulated days when omitted")
    p.add_argument("--days", type=int, default=None)
    p.add_argument("--drift", choices=["rotation", "general-linear", "gain", "offset-only"], default=None)
    p.add_argument("--magnitude", type=float, default=None)
    p.add_argument("--noise-std", type=float, default=None)
    p.add_argument("--calibration-reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sessions-per-day", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=Path, default=None, help="Output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emg_align", description="Multi-day sEMG alignment with CCA")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Write simulated day directories and a manifest")
    _add_experiment_flags(p)

    p = sub.add_parser("train", help="Train the SVM on the reference day")
    _add_experiment_flags(p)

    p = sub.add_parser("calibrate", help="Fit the CCA mapping of one day against day 1")
    _add_experiment_flags(p)
    p.add_argument("--day", type=int, required=True)

    p = sub.add_parser("evaluate", help="Score a day with a saved model")
    _add_experiment_flags(p)
    p.add_argument("--day", type=int, required=True)
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--mapping", type=Path, default=None)

    p = sub.add_parser("report", help="Re-render summary.svg and embeddings from an output directory")
    _add_experiment_flags(p)

    p = sub.add_parser("run-experiment", help="Run the full multi-day experiment")
    _add_experiment_flags(p)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_experiment_config(args.config)
    overrides: dict[str, Any] = {
        "days": args.days,
        "drift.kind": args.drift,
        "drift.magnitude": args.magnitude,
        "drift.noise_std": args.noise_std,
        "calibration_reps": args.calibration_reps,
        "seed": args.seed,
        "sessions_per_day": args.sessions_per_day,
        "workers": args.workers,
        "output_dir": args.out,
    }
    return apply_overrides(config, overrides)


def resolve_source(args: argparse.Namespace, config: ExperimentConfig) -> IDaySource:
    if args.manifest is None:
        return SimulatedDaySource(config)
    manifest = load_manifest(args.manifest)
    if args.sessions_per_day is not None:
        manifest = DatasetManifest.model_validate({**manifest.model_dump(), "sessions_per_day": args.sessions_per_day})
    return DirectoryDaySource(manifest)


def _check_day(source: IDaySource, day_index: int) -> None:
    if not 2 <= day_index <= source.day_count:
        raise ParameterError(f"--day must be in 2..{source.day_count}, got {day_index}")


def cmd_simulate(config: ExperimentConfig, source: IDaySource, args: argparse.Namespace) -> None:
    out = config.output_dir
    names = []
    for d in range(1, source.day_count + 1):
        name = f"day_{d:02d}"
        write_day(source.load(d), out / name, seed=config.seed if d == 1 else config.seed + d)
        names.append(name)
    write_manifest(DatasetManifest(days=names, mode="features"), out / MANIFEST_FILE)
    write_run_metadata(config, out)
    logger.info(f"Simulated {len(names)} days into {out}")


def cmd_train(config: ExperimentConfig, source: IDaySource, args: argparse.Namespace) -> None:
    train, test = split_by_repetition(source.reference(), config.train_fraction)
    svm = config.svm
    model = svm_train(train, reg_c=svm.reg_c, epochs=svm.epochs, seed=svm.seed, batch_size=svm.batch_size)
    held_out = accuracy(svm_predict(model, test), test.labels)
    save_model(model, config.output_dir / MODEL_FILE)
    print(f"reference held-out accuracy: {held_out:.4f}")


def cmd_calibrate(config: ExperimentConfig, source: IDaySource, args: argparse.Namespace) -> None:
    _check_day(source, args.day)
    pair = calibration_subset(source.reference(), source.load(args.day), config.calibration_reps)
    mapping = cca_fit(pair.reference, pair.new, config.ridge)
    save_mapping(mapping, config.output_dir / mapping_file(args.day))
    print(f"day {args.day} canonical correlations: {np.round(mapping.correlations, 4).tolist()}")


def cmd_evaluate(config: ExperimentConfig, source: IDaySource, args: argparse.Namespace) -> None:
    if args.day != 1:
        _check_day(source, args.day)
    day = source.load(args.day)
    model = load_model(args.model)
    if args.mapping is not None:
        day = project_day(load_mapping(args.mapping), day)
        day = day.select(day.repetition_ordinal() >= config.calibration_reps)
    predicted = svm_predict(model, day)
    print(f"day {args.day} accuracy: {accuracy(predicted, day.labels):.4f}")
    for gesture, value in accuracy_per_gesture(predicted, day.labels).items():
        print(f"  gesture {gesture}: {value:.4f}")


def _write_embeddings(out: Path, reference: LabeledWindows, days: dict[int, tuple[LabeledWindows, LabeledWindows]],
                      gestures: list[int]) -> None:
    for d, (unaligned, aligned) in days.items():
        embedding = embed_2d(reference, {"unaligned": unaligned, "aligned": aligned}, gestures)
        write_embedding(embedding, out / embedding_file(d))


def cmd_report(config: ExperimentConfig, source: IDaySource, args: argparse.Namespace) -> None:
    out = config.output_dir
    reports = read_summary(out / SUMMARY_CSV)
    write_summary_svg(reports, out / SUMMARY_SVG)
    reference: Optional[LabeledWindows] = None
    days: dict[int, tuple[LabeledWindows, LabeledWindows]] = {}
    for d in range(2, source.day_count + 1):
        path = out / mapping_file(d)
        if not path.exists():
            continue
        if reference is None:
            reference = source.reference()
        day = source.load(d)
        days[d] = (day, project_day(load_mapping(path), day))
    if reference is not None:
        _write_embeddings(out, reference, days, config.embedding_gestures)
    logger.info(f"Re-rendered report in {out} ({len(days)} embeddings)")


def cmd_run_experiment(config: ExperimentConfig, source: IDaySource, args: argparse.Namespace) -> None:
    out = config.output_dir
    result = ExperimentService(config, source).run()
    emit_report(result.reports, out)
    save_model(result.model, out / MODEL_FILE)
    for d, outcome in enumerate(result.outcomes, start=2):
        save_mapping(outcome.mapping, out / mapping_file(d))
    _write_embeddings(
        out,
        result.reference,
        {d: (o.unaligned, o.aligned) for d, o in enumerate(result.outcomes, start=2)},
        config.embedding_gestures,
    )
    write_run_metadata(config, out, {
        "source": str(args.manifest) if args.manifest is not None else "simulated",
        "acc_reference": result.acc_reference,
    })
    relative = [r.relative_accuracy for r in result.reports]
    print(f"reference accuracy {result.acc_reference:.4f}, "
          f"relative accuracy mean {float(np.mean(relative)):.4f} min {float(np.min(relative)):.4f}")


COMMANDS = {
    "simulate": cmd_simulate,
    "train": cmd_train,
    "calibrate": cmd_calibrate,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
    "run-experiment": cmd_run_experiment,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Exit code 0 on success, 2 on a package error, 1 on anything else"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    try:
        config = resolve_config(args)
        source = resolve_source(args, config)
        COMMANDS[args.command](config, source, args)
    except EmgAlignError as e:
        logger.error(f"{args.command} failed: {e}")
        return 2
    except Exception as e:
        logger.exception(f"Fatal error in {args.command}: {e}")
        return 1
    return 0
