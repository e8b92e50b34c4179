"""Subcommand handlers. Each takes the parsed arguments and returns an exit code."""

from __future__ import annotations

import argparse
import asyncio
import logging
from pathlib import Path

from sfqsim.config import RunConfig, Settings, get_settings, load_config
from sfqsim.control import (
    OptimizationRun,
    StageCheckpoint,
    evaluate_schedule,
    hyperparameter_search,
    optimize,
)
from sfqsim.device import DeviceModel, build_device, calibrate_idle
from sfqsim.gates import (
    build_composite_gate,
    calibrate_fsim,
    composite_layer_targets,
    hold_grid,
    hold_time_sweep,
    local_minima,
    resolve_target,
    synthesize_layer_library,
)
from sfqsim.sequence_io import (
    compressed_bits_per_qubit,
    dump_sequence,
    load_sequence,
    write_sequence,
)
from sfqsim.shared.errors import ContractViolationError, OptimizationAbortedError
from sfqsim.shared.files import atomic_write_bytes, read_input_bytes
from sfqsim.shared.schemas import OptimizerSettings, ScheduleTemplate

from .output import write_csv, write_json

logger = logging.getLogger(__name__)

SWEEP_FIELDS = ("hold_ns", "infidelity", "theta", "phi", "duration_ns", "leakage", "status")
SUFFIXES = {"raw": ".sfq", "compressed": ".sfqz"}


def _config(args: argparse.Namespace) -> RunConfig:
    return load_config(args.config)


def _output_dir(args: argparse.Namespace, config: RunConfig, settings: Settings) -> Path:
    out = args.out or config.output_dir or settings.output_dir
    return Path(out)


def _device(config: RunConfig) -> DeviceModel:
    return build_device(config.circuit, basis=config.basis)


def _optimizer_settings(args: argparse.Namespace, config: RunConfig) -> OptimizerSettings:
    if args.seed is None:
        return config.optimizer
    return config.optimizer.model_copy(update={"seed": args.seed})


def _target_name(args: argparse.Namespace, config: RunConfig) -> str:
    return getattr(args, "target", None) or config.target


def _backend(args: argparse.Namespace, settings: Settings) -> str:
    return args.backend or settings.backend


def calibrate_command(args: argparse.Namespace) -> int:
    config = _config(args)
    out = _output_dir(args, config, get_settings())
    result = calibrate_idle(
        config.circuit,
        config.target_freq,
        settings=config.calibration,
        basis=config.basis,
    )
    logger.info(
        "idle fluxes %s, residual splitting %.3e rad/ns", result.phi_off, result.splitting
    )
    write_json(out / "calibration.json", result)
    return 0


def _write_run(out: Path, run: OptimizationRun) -> None:
    write_json(out / "run.json", run.summary())
    if run.status != "completed" or run.schedule is None or run.report is None:
        raise OptimizationAbortedError(
            f"optimization of {run.target} did not complete", run_error=str(run.error)
        )
    atomic_write_bytes(out / "sequence.sfq", write_sequence(run.schedule))
    write_json(out / "report.json", run.report.summary(run.target))
    logger.info("%s: discrete fidelity %.6f", run.target, run.report.fidelity)


def optimize_command(args: argparse.Namespace) -> int:
    config = _config(args)
    settings = get_settings()
    out = _output_dir(args, config, settings)
    device = _device(config)
    name = _target_name(args, config)
    target = resolve_target(name)
    optimizer_settings = _optimizer_settings(args, config)

    if args.budget:
        if args.resume is not None:
            raise ContractViolationError("--resume applies to a single run, not a search")
        runs = asyncio.run(
            hyperparameter_search(
                config.search,
                args.budget,
                optimizer_settings.seed,
                target=name,
                target_matrix=target,
                template=config.schedule,
                settings=optimizer_settings,
                device=device,
                workers=settings.workers,
            )
        )
        write_json(out / "search.json", [run.summary() for run in runs])
        _write_run(out, runs[0])
        return 0

    checkpoints = out / "checkpoints"

    def save(checkpoint: StageCheckpoint) -> None:
        checkpoint.write(checkpoints / f"stage-{checkpoint.stage:04d}.json")

    resume = StageCheckpoint.read(args.resume) if args.resume is not None else None
    run = optimize(
        OptimizationRun(
            target=name,
            target_matrix=target,
            template=config.schedule,
            settings=optimizer_settings,
        ),
        device,
        resume_from=resume,
        on_stage=save,
    )
    _write_run(out, run)
    return 0


def sweep_fsim_command(args: argparse.Namespace) -> int:
    config = _config(args)
    settings = get_settings()
    out = _output_dir(args, config, settings)
    plan = config.decomposition
    rows = asyncio.run(
        hold_time_sweep(
            _device(config),
            hold_grid(plan.sweep_start, plan.sweep_stop, plan.sweep_step),
            ramp_steps=plan.ramp_steps,
            step_duration=plan.step_duration,
            workers=settings.workers,
        )
    )
    write_csv(out / "fsim_sweep.csv", rows, SWEEP_FIELDS)
    for row in local_minima(rows):
        logger.info(
            "local minimum at %.2f ns: infidelity %.3e, theta %.4f, phi %.4f",
            row.hold_ns,
            row.infidelity,
            row.theta,
            row.phi,
        )
    return 0


def decompose_command(args: argparse.Namespace) -> int:
    config = _config(args)
    out = _output_dir(args, config, get_settings())
    target = _target_name(args, config)
    if target not in ("cz", "cnot"):
        raise ContractViolationError(f"decompose builds cz or cnot, not {target!r}")
    device = _device(config)
    plan = config.decomposition
    optimizer_settings = _optimizer_settings(args, config)

    calibration = calibrate_fsim(
        device, plan.hold_ns, ramp_steps=plan.ramp_steps, step_duration=plan.step_duration
    )
    write_json(out / "fsim.json", calibration.params)
    layers = composite_layer_targets(target, calibration.params)
    template = ScheduleTemplate.model_validate(
        {**config.schedule.model_dump(), "duration": plan.layer_duration, "excursions": 0}
    )
    library = synthesize_layer_library(
        device,
        layers,
        template,
        optimizer_settings,
        on_layer=lambda name, run: write_json(out / f"layer-{name}.json", run.summary()),
    )
    schedule, report = build_composite_gate(
        target, calibration, library, device, z_compensate=optimizer_settings.z_compensate
    )
    stats = compressed_bits_per_qubit(schedule, config.schedule.qubit_freq)
    atomic_write_bytes(out / "composite.sfq", dump_sequence(schedule, "raw"))
    atomic_write_bytes(
        out / "composite.sfqz",
        dump_sequence(schedule, "compressed", qubit_freq=config.schedule.qubit_freq),
    )
    write_json(
        out / "composite.json",
        {
            "report": report.summary(target),
            "fsim": calibration.params,
            "compression": {
                "raw_bits": stats.raw_bits,
                "corner_bits": stats.corner_bits,
                "qubit_bits": list(stats.qubit_bits),
            },
        },
    )
    logger.info(
        "composite %s: fidelity %.6f, %d of %d bits per qubit",
        target,
        report.fidelity,
        stats.bits_per_qubit,
        stats.raw_bits,
    )
    return 0


def evaluate_command(args: argparse.Namespace) -> int:
    config = _config(args)
    settings = get_settings()
    out = _output_dir(args, config, settings)
    name = _target_name(args, config)
    schedule = load_sequence(read_input_bytes(args.sequence, "sequence file"))
    report = evaluate_schedule(
        schedule,
        _device(config),
        resolve_target(name),
        _backend(args, settings),
        z_compensate=config.optimizer.z_compensate,
        substeps=settings.trotter_substeps,
    )
    write_json(out / "evaluation.json", report.summary(name))
    logger.info("%s: fidelity %.12f, leakage %.3e", name, report.fidelity, report.leakage)
    return 0


def export_command(args: argparse.Namespace) -> int:
    config = _config(args)
    out = _output_dir(args, config, get_settings())
    source = Path(args.sequence)
    schedule = load_sequence(read_input_bytes(source, "sequence file"))
    data = dump_sequence(schedule, args.format, qubit_freq=config.schedule.qubit_freq)
    path = out / (source.stem + SUFFIXES[args.format])
    atomic_write_bytes(path, data)
    logger.info("wrote %s (%d bytes)", path, len(data))
    return 0
