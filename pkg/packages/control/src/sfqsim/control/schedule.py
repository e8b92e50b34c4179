"""SFQ control schedules: kick amplitudes on the clock grid and coupler excursions."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Literal

import numpy as np
from sfqsim.shared.errors import ContractViolationError
from sfqsim.shared.schemas import ScheduleTemplate

ScheduleMode = Literal["relaxed", "discrete"]
Excursion = tuple[float, float]

# Fixed-point scales of the sequence file header: stored integer = round(value * scale).
CLOCK_SCALE = 1e12  # mHz per GHz
DURATION_SCALE = 1e3  # ps per ns
KICK_SCALE = 1e6  # microradians per rad
FLUX_SCALE = 1e6  # micro-Phi0 per Phi0

_GRID_TOLERANCE = 1e-9


def _tick_count(duration: float, clock_freq: float) -> int:
    return int(math.floor(duration * clock_freq + _GRID_TOLERANCE))


def _frozen_amplitudes(values: Sequence[float] | np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ControlSchedule:
    """Per-qubit kick amplitudes (one per clock tick) plus coupler excursions.

    Excursion corner times are in ns. In discrete mode amplitudes are 0/1 and
    corners sit on clock ticks; relaxed mode allows values in [0, 1] and
    continuous corners.
    """

    clock_freq: float
    duration: float
    kick_angle: float
    amplitudes_q1: np.ndarray
    amplitudes_q2: np.ndarray
    excursions: tuple[Excursion, ...] = ()
    n_ramp: int = 64
    flux_off: float = 0.352
    flux_on: float = 0.376
    mode: ScheduleMode = "discrete"

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes_q1", _frozen_amplitudes(self.amplitudes_q1))
        object.__setattr__(self, "amplitudes_q2", _frozen_amplitudes(self.amplitudes_q2))
        object.__setattr__(
            self,
            "excursions",
            tuple((float(start), float(end)) for start, end in self.excursions),
        )
        self.validate()

    @property
    def period(self) -> float:
        return 1.0 / self.clock_freq

    @property
    def n_ticks(self) -> int:
        return _tick_count(self.duration, self.clock_freq)

    @property
    def frame_duration(self) -> float:
        """Time covered by the simulated ticks."""
        return self.n_ticks * self.period

    def validate(self) -> None:
        if self.clock_freq <= 0.0 or self.duration < 0.0:
            raise ContractViolationError("clock frequency and duration must be positive")
        if self.n_ramp < 1:
            raise ContractViolationError("n_ramp must be at least 1")
        n = self.n_ticks
        for qubit, values in ((1, self.amplitudes_q1), (2, self.amplitudes_q2)):
            if values.shape != (n,):
                raise ContractViolationError(
                    f"qubit {qubit} needs {n} amplitudes, got {values.shape[0]}"
                )
            if values.size and (values.min() < 0.0 or values.max() > 1.0):
                raise ContractViolationError(f"qubit {qubit} amplitudes outside [0, 1]")
        for start, end in self.excursions:
            if not (0.0 <= start <= self.duration and 0.0 <= end <= self.duration):
                raise ContractViolationError("excursion corners must lie in [0, duration]")
        if self.mode == "discrete":
            self._validate_discrete()

    def _validate_discrete(self) -> None:
        for qubit, values in ((1, self.amplitudes_q1), (2, self.amplitudes_q2)):
            if np.any((values != 0.0) & (values != 1.0)):
                raise ContractViolationError(f"qubit {qubit} amplitudes must be 0 or 1")
        for index, (start, end) in enumerate(self.excursions):
            for corner in (start, end):
                ticks = corner * self.clock_freq
                if abs(ticks - round(ticks)) > _GRID_TOLERANCE * max(1.0, ticks):
                    raise ContractViolationError(
                        f"excursion {index} corner {corner} ns is off the clock grid"
                    )
        problems = excursion_problems(self.corner_ticks(), self.n_ramp, self.n_ticks)
        for index, problem in enumerate(problems):
            if problem:
                raise ContractViolationError(f"excursion {index}: {problem}")

    def corner_ticks(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (round(start * self.clock_freq), round(end * self.clock_freq))
            for start, end in self.excursions
        )

    def ramp_fractions(self) -> np.ndarray:
        """Fraction of the way from flux_off to flux_on at the start of every tick."""
        return self._ramp_profile[0]

    def tick_fluxes(self) -> np.ndarray:
        """Coupler flux held during each tick (sampled at the tick start)."""
        delta = self.flux_on - self.flux_off
        if self.mode == "discrete":
            steps = self._discrete_steps()
            return self.flux_off + (delta * steps) / self.n_ramp
        return self.flux_off + delta * self.ramp_fractions()

    def tick_flux_slopes(self) -> np.ndarray:
        """d(tick flux)/d(corner) with columns (start_0, end_0, start_1, ...)."""
        return (self.flux_on - self.flux_off) * self._ramp_profile[1]

    def _discrete_steps(self) -> np.ndarray:
        ticks = np.arange(self.n_ticks)
        steps = np.zeros(self.n_ticks, dtype=np.int64)
        for start, end in self.corner_ticks():
            steps += np.clip(np.minimum(ticks - start, end - ticks), 0, self.n_ramp)
        return steps

    @cached_property
    def _ramp_profile(self) -> tuple[np.ndarray, np.ndarray]:
        times = np.arange(self.n_ticks) * self.period
        width = self.n_ramp * self.period
        fractions = np.zeros(self.n_ticks)
        slopes = np.zeros((self.n_ticks, 2 * len(self.excursions)))
        for index, (start, end) in enumerate(self.excursions):
            rising = (times - start) / width
            falling = (end - times) / width
            level = np.minimum(rising, falling)
            fractions += np.clip(level, 0.0, 1.0)
            active = (level > 0.0) & (level < 1.0)
            on_rise = active & (rising <= falling)
            slopes[on_rise, 2 * index] = -1.0 / width
            slopes[active & ~on_rise, 2 * index + 1] = 1.0 / width
        return fractions, slopes

    def quantized(self) -> ControlSchedule:
        """Copy with header values on the sequence-file fixed-point grid."""

        def snap(value: float, scale: float) -> float:
            return round(value * scale) / scale

        clock = snap(self.clock_freq, CLOCK_SCALE)
        duration = snap(self.duration, DURATION_SCALE)
        if _tick_count(duration, clock) != self.n_ticks:
            # Rounding crossed a tick boundary; take the shortest grid duration
            # that still holds every tick.
            ps = math.ceil(self.n_ticks / clock * DURATION_SCALE - _GRID_TOLERANCE)
            duration = ps / DURATION_SCALE
        return replace(
            self,
            clock_freq=clock,
            duration=duration,
            kick_angle=snap(self.kick_angle, KICK_SCALE),
            flux_off=snap(self.flux_off, FLUX_SCALE),
            flux_on=snap(self.flux_on, FLUX_SCALE),
            excursions=tuple(
                (start / clock, end / clock) for start, end in self.corner_ticks()
            ),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ControlSchedule):
            return NotImplemented
        return (
            self.clock_freq == other.clock_freq
            and self.duration == other.duration
            and self.kick_angle == other.kick_angle
            and self.excursions == other.excursions
            and self.n_ramp == other.n_ramp
            and self.flux_off == other.flux_off
            and self.flux_on == other.flux_on
            and self.mode == other.mode
            and np.array_equal(self.amplitudes_q1, other.amplitudes_q1)
            and np.array_equal(self.amplitudes_q2, other.amplitudes_q2)
        )

    __hash__ = None  # type: ignore[assignment]


def excursion_problems(
    corners: Sequence[tuple[int, int]], n_ramp: int, n_ticks: int
) -> list[str | None]:
    """Per-excursion description of a discrete-mode violation, or None."""
    problems: list[str | None] = []
    previous_end = 0
    for start, end in corners:
        if start < 0 or end > n_ticks:
            problems.append("outside the schedule")
        elif end - start < 2 * n_ramp:
            problems.append("shorter than the two ramps")
        elif start < previous_end:
            problems.append("overlaps the previous excursion")
        else:
            problems.append(None)
        previous_end = max(previous_end, end)
    return problems


def idle_schedule(
    template: ScheduleTemplate,
    flux_off: float,
    flux_on: float,
    duration: float | None = None,
) -> ControlSchedule:
    """Kick-free, excursion-free schedule on the template's clock."""
    duration = template.duration if duration is None else duration
    n = int(math.floor(duration * template.clock_freq + _GRID_TOLERANCE))
    return ControlSchedule(
        clock_freq=template.clock_freq,
        duration=duration,
        kick_angle=template.kick_angle,
        amplitudes_q1=np.zeros(n),
        amplitudes_q2=np.zeros(n),
        n_ramp=template.n_ramp,
        flux_off=flux_off,
        flux_on=flux_on,
    )


def flux_trajectory(schedule: ControlSchedule, t: float) -> float:
    """Coupler flux at time ``t``.

    Discrete schedules hold the value of the current tick (a staircase);
    relaxed schedules follow the continuous trapezoid.
    """
    if not 0.0 <= t <= schedule.duration:
        raise ContractViolationError(f"time {t} ns outside [0, {schedule.duration}]")
    delta = schedule.flux_on - schedule.flux_off
    if schedule.mode == "discrete":
        tick = math.floor(t / schedule.period + _GRID_TOLERANCE)
        steps = sum(
            min(max(min(tick - start, end - tick), 0), schedule.n_ramp)
            for start, end in schedule.corner_ticks()
        )
        return schedule.flux_off + (delta * steps) / schedule.n_ramp
    width = schedule.n_ramp * schedule.period
    level = sum(
        min(max(min(t - start, end - t) / width, 0.0), 1.0)
        for start, end in schedule.excursions
    )
    return schedule.flux_off + delta * level
