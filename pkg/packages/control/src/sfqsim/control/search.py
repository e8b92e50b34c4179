"""Seeded random search over schedule hyperparameters."""

from __future__ import annotations

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from pydantic import ValidationError
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import SfqSimError
from sfqsim.shared.schemas import OptimizerSettings, ScheduleTemplate, SearchSpace

from .optimizer import OptimizationRun, optimize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trial:
    index: int
    target: str
    target_matrix: np.ndarray
    base_template: ScheduleTemplate
    choices: dict[str, float | int]
    settings: OptimizerSettings
    device: DeviceModel


def sample_trials(
    space: SearchSpace,
    budget: int,
    seed: int,
    *,
    target: str,
    target_matrix: np.ndarray,
    template: ScheduleTemplate,
    settings: OptimizerSettings,
    device: DeviceModel,
) -> list[Trial]:
    """Draw ``budget`` configurations; each gets its own spawned optimizer seed."""
    if budget < 1:
        raise ValueError("search budget must be at least 1")
    rng = np.random.default_rng(seed)
    children = np.random.SeedSequence(seed).spawn(budget)
    trials = []
    for index, child in enumerate(children):
        pairs = space.clock_kick_pairs
        clock_freq, kick_angle = pairs[rng.integers(len(pairs))]
        choices: dict[str, float | int] = {
            "duration": float(space.durations[rng.integers(len(space.durations))]),
            "clock_freq": float(clock_freq),
            "kick_angle": float(kick_angle),
            "n_ramp": int(space.ramp_steps[rng.integers(len(space.ramp_steps))]),
            "excursions": int(
                space.excursion_counts[rng.integers(len(space.excursion_counts))]
            ),
        }
        trial_settings = settings.model_copy(
            update={"seed": int(child.generate_state(1)[0])}
        )
        trials.append(
            Trial(
                index=index,
                target=target,
                target_matrix=target_matrix,
                base_template=template,
                choices=choices,
                settings=trial_settings,
                device=device,
            )
        )
    return trials


def run_trial(trial: Trial) -> OptimizationRun:
    """Optimize one sampled configuration; failures come back as failed runs."""
    try:
        template = ScheduleTemplate.model_validate(
            {**trial.base_template.model_dump(), **trial.choices}
        )
    except ValidationError as exc:
        logger.warning("trial %d: invalid configuration %s", trial.index, trial.choices)
        return OptimizationRun(
            target=trial.target,
            target_matrix=trial.target_matrix,
            template=trial.base_template,
            settings=trial.settings,
            status="failed",
            error={
                "error": "invalid-configuration",
                "message": str(exc),
                "details": trial.choices,
            },
        )
    run = OptimizationRun(
        target=trial.target,
        target_matrix=trial.target_matrix,
        template=template,
        settings=trial.settings,
    )
    try:
        return optimize(run, trial.device)
    except SfqSimError as exc:
        logger.warning("trial %d failed: %s", trial.index, exc.message)
        return OptimizationRun(
            target=run.target,
            target_matrix=run.target_matrix,
            template=template,
            settings=run.settings,
            status="failed",
            error=exc.to_record(),
        )


def rank_runs(runs: list[OptimizationRun]) -> list[OptimizationRun]:
    """Completed runs by discrete infidelity, failed runs last, ties by sample order."""
    order = sorted(
        range(len(runs)),
        key=lambda i: (runs[i].status != "completed", runs[i].discrete_infidelity, i),
    )
    return [runs[i] for i in order]


async def hyperparameter_search(
    space: SearchSpace,
    budget: int,
    seed: int,
    *,
    target: str,
    target_matrix: np.ndarray,
    template: ScheduleTemplate,
    settings: OptimizerSettings,
    device: DeviceModel,
    workers: int = 1,
    executor: Executor | None = None,
) -> list[OptimizationRun]:
    """Optimize ``budget`` sampled configurations and rank them.

    Results depend only on ``seed``, never on the worker count.
    """
    trials = sample_trials(
        space,
        budget,
        seed,
        target=target,
        target_matrix=target_matrix,
        template=template,
        settings=settings,
        device=device,
    )
    logger.info("hyperparameter search: %d trials, %d workers", budget, workers)
    if executor is None and workers <= 1:
        runs = [run_trial(trial) for trial in trials]
        return rank_runs(runs)

    loop = asyncio.get_running_loop()
    owned = executor is None
    pool = executor or ProcessPoolExecutor(max_workers=workers)
    sem = asyncio.Semaphore(max(workers, 1))

    async def _run(trial: Trial) -> OptimizationRun:
        async with sem:
            return await loop.run_in_executor(pool, run_trial, trial)

    try:
        runs = await asyncio.gather(*(_run(trial) for trial in trials))
    finally:
        if owned:
            pool.shutdown()
    return rank_runs(list(runs))
