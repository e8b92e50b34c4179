"""Fixed-point sequence header shared by the raw and compressed formats."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
from sfqsim.control.schedule import (
    CLOCK_SCALE,
    DURATION_SCALE,
    FLUX_SCALE,
    KICK_SCALE,
    ControlSchedule,
)
from sfqsim.shared.errors import ScheduleModeError, SequenceFormatError

VERSION = 1

# magic, version, clock (mHz), duration (ps), kick (urad), flux off/on (uPhi0),
# n_ramp, excursion count
HEADER = struct.Struct("<4sHQQIIIHH")

_LIMITS = {"Q": 2**64 - 1, "I": 2**32 - 1, "H": 2**16 - 1}


def _fixed(name: str, value: float, scale: float, code: str) -> int:
    stored = round(value * scale)
    if not 0 <= stored <= _LIMITS[code]:
        raise SequenceFormatError(
            f"{name} = {value} does not fit the header field", field=name, value=value
        )
    return stored


@dataclass(frozen=True)
class SequenceHeader:
    clock_mhz: int
    duration_ps: int
    kick_urad: int
    flux_off_uphi: int
    flux_on_uphi: int
    n_ramp: int
    n_excursions: int

    @classmethod
    def from_schedule(cls, schedule: ControlSchedule) -> SequenceHeader:
        if schedule.mode != "discrete":
            raise ScheduleModeError("only discrete schedules can be serialized")
        duration = schedule.quantized().duration
        header = cls(
            clock_mhz=_fixed("clock_freq", schedule.clock_freq, CLOCK_SCALE, "Q"),
            duration_ps=_fixed("duration", duration, DURATION_SCALE, "Q"),
            kick_urad=_fixed("kick_angle", schedule.kick_angle, KICK_SCALE, "I"),
            flux_off_uphi=_fixed("flux_off", schedule.flux_off, FLUX_SCALE, "I"),
            flux_on_uphi=_fixed("flux_on", schedule.flux_on, FLUX_SCALE, "I"),
            n_ramp=_fixed("n_ramp", schedule.n_ramp, 1, "H"),
            n_excursions=_fixed("excursions", len(schedule.excursions), 1, "H"),
        )
        if header.n_ticks != schedule.n_ticks:
            raise SequenceFormatError(
                f"header duration {header.duration} ns holds {header.n_ticks} ticks, "
                f"schedule has {schedule.n_ticks}",
                expected=schedule.n_ticks,
                actual=header.n_ticks,
            )
        return header

    @property
    def clock_freq(self) -> float:
        return self.clock_mhz / CLOCK_SCALE

    @property
    def duration(self) -> float:
        return self.duration_ps / DURATION_SCALE

    @property
    def n_ticks(self) -> int:
        if self.clock_mhz == 0:
            raise SequenceFormatError("header has a zero clock frequency")
        return int(math.floor(self.duration * self.clock_freq + 1e-9))

    def pack(self, magic: bytes) -> bytes:
        return HEADER.pack(
            magic,
            VERSION,
            self.clock_mhz,
            self.duration_ps,
            self.kick_urad,
            self.flux_off_uphi,
            self.flux_on_uphi,
            self.n_ramp,
            self.n_excursions,
        )

    @classmethod
    def unpack(cls, data: bytes, magic: bytes) -> SequenceHeader:
        if len(data) < HEADER.size:
            raise SequenceFormatError(
                f"{len(data)} bytes is shorter than the {HEADER.size}-byte header"
            )
        found, version, *fields = HEADER.unpack_from(data)
        if found != magic:
            raise SequenceFormatError(f"bad magic {found!r}, expected {magic!r}")
        if version != VERSION:
            raise SequenceFormatError(
                f"unsupported format version {version}", version=version
            )
        return cls(*fields)

    def schedule(
        self,
        corners: list[tuple[int, int]],
        amplitudes_q1: np.ndarray,
        amplitudes_q2: np.ndarray,
    ) -> ControlSchedule:
        clock = self.clock_freq
        return ControlSchedule(
            clock_freq=clock,
            duration=self.duration,
            kick_angle=self.kick_urad / KICK_SCALE,
            amplitudes_q1=amplitudes_q1,
            amplitudes_q2=amplitudes_q2,
            excursions=tuple((start / clock, end / clock) for start, end in corners),
            n_ramp=self.n_ramp,
            flux_off=self.flux_off_uphi / FLUX_SCALE,
            flux_on=self.flux_on_uphi / FLUX_SCALE,
        )
