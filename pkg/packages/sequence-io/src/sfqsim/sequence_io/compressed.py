"""Compact "SFQZ" sequence files built on the periodic slot structure.

With the clock an integer multiple m of the qubit frequency, each qubit period
offers m slots. A qubit's kicks are reshaped into m slot streams (one bit per
qubit period each) and every stream is run-length encoded: its first bit,
then the Elias gamma code of each run length. Corner ticks are gamma-coded as
gaps. Both live in one bit stream after the fixed-point header and a u16
slot count.
"""

from __future__ import annotations

import logging
import math
import struct
from dataclasses import dataclass

import numpy as np
from sfqsim.control.schedule import ControlSchedule
from sfqsim.shared.errors import (
    ContractViolationError,
    SequenceFormatError,
    UnsupportedRatioError,
)

from .bits import BitReader, BitWriter
from .header import HEADER, SequenceHeader

logger = logging.getLogger(__name__)

MAGIC = b"SFQZ"
SLOTS = struct.Struct("<H")
_RATIO_TOLERANCE = 1e-9


def slots_per_period(clock_freq: float, qubit_freq: float) -> int:
    ratio = clock_freq / qubit_freq
    slots = round(ratio)
    if slots < 1 or slots > 2**16 - 1 or abs(ratio - slots) > _RATIO_TOLERANCE * slots:
        raise UnsupportedRatioError(
            f"clock {clock_freq} GHz is not an integer multiple of the "
            f"{qubit_freq} GHz qubit frequency",
            clock_freq=clock_freq,
            qubit_freq=qubit_freq,
        )
    return slots


def _slot_streams(amplitudes: np.ndarray, slots: int) -> np.ndarray:
    """(slots, periods) bit matrix; the last period is zero-padded."""
    periods = math.ceil(amplitudes.size / slots)
    padded = np.zeros(periods * slots, dtype=np.int8)
    padded[: amplitudes.size] = amplitudes
    return padded.reshape(periods, slots).T


def _run_lengths(stream: np.ndarray) -> np.ndarray:
    changes = np.flatnonzero(np.diff(stream)) + 1
    return np.diff(np.concatenate(([0], changes, [stream.size])))


def _write_qubit(writer: BitWriter, amplitudes: np.ndarray, slots: int) -> None:
    for stream in _slot_streams(amplitudes, slots):
        if stream.size == 0:
            continue
        writer.write_bit(int(stream[0]))
        for length in _run_lengths(stream):
            writer.write_gamma(int(length))


def _read_qubit(reader: BitReader, n_ticks: int, slots: int) -> np.ndarray:
    periods = math.ceil(n_ticks / slots)
    streams = np.zeros((slots, periods), dtype=np.int8)
    for stream in streams:
        if periods == 0:
            break
        value = reader.read_bit()
        position = 0
        while position < periods:
            length = reader.read_gamma()
            if position + length > periods:
                raise SequenceFormatError("slot run overruns the sequence")
            stream[position : position + length] = value
            position += length
            value ^= 1
    bits = streams.T.reshape(-1)
    if bits[n_ticks:].any():
        raise SequenceFormatError("kick encoded after the last tick")
    return bits[:n_ticks].astype(float)


def _write_corners(writer: BitWriter, corners: tuple[tuple[int, int], ...]) -> None:
    previous = 0
    for start, end in corners:
        writer.write_gamma(start - previous + 1)
        writer.write_gamma(end - start + 1)
        previous = end


def _read_corners(reader: BitReader, count: int) -> list[tuple[int, int]]:
    corners = []
    previous = 0
    for _ in range(count):
        start = previous + reader.read_gamma() - 1
        end = start + reader.read_gamma() - 1
        corners.append((start, end))
        previous = end
    return corners


def compress_sequence(schedule: ControlSchedule, qubit_freq: float = 5.0) -> bytes:
    """Lossless compact encoding; decompresses to ``schedule.quantized()``."""
    header = SequenceHeader.from_schedule(schedule)
    slots = slots_per_period(schedule.clock_freq, qubit_freq)
    writer = BitWriter()
    _write_corners(writer, schedule.corner_ticks())
    for amplitudes in (schedule.amplitudes_q1, schedule.amplitudes_q2):
        _write_qubit(writer, amplitudes, slots)
    data = header.pack(MAGIC) + SLOTS.pack(slots) + writer.to_bytes()
    logger.debug("compressed %d ticks into %d bytes", schedule.n_ticks, len(data))
    return data


def decompress_sequence(data: bytes) -> ControlSchedule:
    header = SequenceHeader.unpack(data, MAGIC)
    if len(data) < HEADER.size + SLOTS.size:
        raise SequenceFormatError("compressed sequence is missing its slot count")
    (slots,) = SLOTS.unpack_from(data, HEADER.size)
    if slots < 1:
        raise SequenceFormatError("slot count must be positive")
    reader = BitReader(data[HEADER.size + SLOTS.size :])
    n_ticks = header.n_ticks
    corners = _read_corners(reader, header.n_excursions)
    q1 = _read_qubit(reader, n_ticks, slots)
    q2 = _read_qubit(reader, n_ticks, slots)
    reader.check_padding()
    try:
        return header.schedule(corners, q1, q2)
    except ContractViolationError as exc:
        raise SequenceFormatError(f"decoded schedule is invalid: {exc.message}") from exc


@dataclass(frozen=True)
class CompressionStats:
    raw_bits: int
    corner_bits: int
    qubit_bits: tuple[int, int]

    @property
    def bits_per_qubit(self) -> int:
        return max(self.qubit_bits)

    @property
    def ratio(self) -> float:
        return self.bits_per_qubit / self.raw_bits if self.raw_bits else 0.0


def compressed_bits_per_qubit(
    schedule: ControlSchedule, qubit_freq: float = 5.0
) -> CompressionStats:
    """Payload bits of each qubit's slot streams next to the raw tick count."""
    slots = slots_per_period(schedule.clock_freq, qubit_freq)
    corners = BitWriter()
    _write_corners(corners, schedule.corner_ticks())
    counts = []
    for amplitudes in (schedule.amplitudes_q1, schedule.amplitudes_q2):
        writer = BitWriter()
        _write_qubit(writer, amplitudes, slots)
        counts.append(len(writer))
    return CompressionStats(
        raw_bits=schedule.n_ticks, corner_bits=len(corners), qubit_bits=(counts[0], counts[1])
    )
