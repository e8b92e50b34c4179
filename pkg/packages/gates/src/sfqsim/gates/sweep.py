"""Coupler-excursion fSim gates and the hold-time calibration sweep."""

from __future__ import annotations

import asyncio
import logging
import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from sfqsim.control.propagator import logical_matrix, propagate_logical
from sfqsim.control.schedule import ControlSchedule
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import ContractViolationError, FsimExtractionError
from sfqsim.shared.results import FsimParams, SweepRow

from .fsim import extract_fsim

logger = logging.getLogger(__name__)

# Kicks are absent from excursion-only schedules; the angle only labels the clock.
_UNUSED_KICK_ANGLE = math.pi / 100
_GRID_TOLERANCE = 1e-9


def fsim_schedule(
    device: DeviceModel,
    hold_ns: float,
    *,
    ramp_steps: int = 64,
    step_duration: float = 0.05,
) -> ControlSchedule:
    """Kick-free schedule with one excursion: ramp up, hold, ramp down.

    Total duration is hold_ns + 2 * ramp_steps * step_duration.
    """
    if hold_ns <= 0.0:
        raise ContractViolationError(f"hold time must be positive, got {hold_ns}")
    clock = 1.0 / step_duration
    hold_ticks = round(hold_ns * clock)
    if abs(hold_ns * clock - hold_ticks) > _GRID_TOLERANCE * max(1.0, hold_ticks):
        raise ContractViolationError(
            f"hold time {hold_ns} ns is not a multiple of the {step_duration} ns step"
        )
    n_ticks = hold_ticks + 2 * ramp_steps
    duration = n_ticks / clock
    return ControlSchedule(
        clock_freq=clock,
        duration=duration,
        kick_angle=_UNUSED_KICK_ANGLE,
        amplitudes_q1=np.zeros(n_ticks),
        amplitudes_q2=np.zeros(n_ticks),
        excursions=((0.0, duration),),
        n_ramp=ramp_steps,
        flux_off=device.coupler_off,
        flux_on=device.coupler_on,
    )


@dataclass(frozen=True)
class FsimCalibration:
    """A simulated fSim excursion and its best-fit parameters."""

    hold_ns: float
    schedule: ControlSchedule
    matrix: np.ndarray
    params: FsimParams

    @property
    def duration(self) -> float:
        return self.schedule.duration

    @property
    def leakage(self) -> float:
        return 1.0 - float(np.real(np.trace(self.matrix.conj().T @ self.matrix))) / 4.0


def calibrate_fsim(
    device: DeviceModel,
    hold_ns: float,
    *,
    ramp_steps: int = 64,
    step_duration: float = 0.05,
) -> FsimCalibration:
    schedule = fsim_schedule(
        device, hold_ns, ramp_steps=ramp_steps, step_duration=step_duration
    )
    columns = propagate_logical(schedule, device, "exact-segment")
    matrix = logical_matrix(device, schedule, columns)
    params = extract_fsim(matrix)
    logger.debug(
        "hold %.2f ns: theta %.4f, phi %.4f, fit fidelity %.6f",
        hold_ns,
        params.theta,
        params.phi,
        params.fit_fidelity,
    )
    return FsimCalibration(hold_ns=hold_ns, schedule=schedule, matrix=matrix, params=params)


def sweep_row(
    device: DeviceModel, hold_ns: float, ramp_steps: int, step_duration: float
) -> SweepRow:
    duration = hold_ns + 2 * ramp_steps * step_duration
    try:
        calibration = calibrate_fsim(
            device, hold_ns, ramp_steps=ramp_steps, step_duration=step_duration
        )
    except FsimExtractionError as exc:
        logger.warning("hold %.2f ns: %s", hold_ns, exc.message)
        return SweepRow(
            hold_ns=hold_ns,
            duration_ns=duration,
            infidelity=math.nan,
            theta=math.nan,
            phi=math.nan,
            leakage=float(exc.details.get("leakage", math.nan)),
            status="failed",
        )
    return SweepRow(
        hold_ns=hold_ns,
        duration_ns=calibration.duration,
        infidelity=1.0 - calibration.params.fit_fidelity,
        theta=calibration.params.theta,
        phi=calibration.params.phi,
        leakage=calibration.leakage,
    )


def hold_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid of hold times, rounded to the step."""
    count = int(math.floor((stop - start) / step + _GRID_TOLERANCE)) + 1
    return [round(start + index * step, 12) for index in range(max(count, 0))]


async def hold_time_sweep(
    device: DeviceModel,
    hold_times: list[float],
    *,
    ramp_steps: int = 64,
    step_duration: float = 0.05,
    workers: int = 1,
    executor: Executor | None = None,
) -> list[SweepRow]:
    """One row per hold time, in input order, independent of the worker count."""
    if any(hold <= 0.0 for hold in hold_times):
        raise ContractViolationError("hold times must be positive")
    logger.info("fSim sweep over %d hold times", len(hold_times))
    if executor is None and workers <= 1:
        return [sweep_row(device, hold, ramp_steps, step_duration) for hold in hold_times]

    loop = asyncio.get_running_loop()
    owned = executor is None
    pool = executor or ProcessPoolExecutor(max_workers=workers)
    sem = asyncio.Semaphore(max(workers, 1))

    async def _row(hold: float) -> SweepRow:
        async with sem:
            return await loop.run_in_executor(
                pool, sweep_row, device, hold, ramp_steps, step_duration
            )

    try:
        rows = await asyncio.gather(*(_row(hold) for hold in hold_times))
    finally:
        if owned:
            pool.shutdown()
    return list(rows)


def local_minima(rows: list[SweepRow]) -> list[SweepRow]:
    """Interior rows whose infidelity is below both neighbours."""
    minima = []
    for before, row, after in zip(rows, rows[1:], rows[2:], strict=False):
        if row.infidelity < before.infidelity and row.infidelity < after.infidelity:
            minima.append(row)
    return minima


def best_row(rows: list[SweepRow]) -> SweepRow:
    completed = [row for row in rows if row.status == "completed"]
    if not completed:
        raise ContractViolationError("no completed sweep rows")
    return min(completed, key=lambda row: row.infidelity)
