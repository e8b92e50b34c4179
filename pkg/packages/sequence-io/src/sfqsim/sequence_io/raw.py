"""Raw "SFQ1" sequence files: header, corner ticks, one bit per clock tick.

Layout (little-endian)::

    header                        38 bytes, see header.HEADER
    corner ticks                  2 x u32 per excursion (start, end)
    qubit 1 amplitudes            ceil(n_ticks / 8) bytes
    qubit 2 amplitudes            ceil(n_ticks / 8) bytes

Tick 0 is the least significant bit of the first payload byte; pad bits are zero.
"""

from __future__ import annotations

import logging
import struct

import numpy as np
from sfqsim.control.schedule import ControlSchedule
from sfqsim.shared.errors import ContractViolationError, SequenceFormatError

from .header import HEADER, SequenceHeader

logger = logging.getLogger(__name__)

MAGIC = b"SFQ1"


def pack_amplitudes(amplitudes: np.ndarray) -> bytes:
    return np.packbits(amplitudes.astype(np.uint8), bitorder="little").tobytes()


def unpack_amplitudes(data: bytes, n_ticks: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if bits[n_ticks:].any():
        raise SequenceFormatError("non-zero pad bits after the last tick")
    return bits[:n_ticks].astype(float)


def payload_bytes(n_ticks: int) -> int:
    return (n_ticks + 7) // 8


def write_sequence(schedule: ControlSchedule) -> bytes:
    """Serialize a discrete schedule.

    Header values are stored on the fixed-point grid, so
    ``read_sequence(write_sequence(s)) == s.quantized()``.
    """
    header = SequenceHeader.from_schedule(schedule)
    corners = [tick for pair in schedule.corner_ticks() for tick in pair]
    if any(tick > 2**32 - 1 for tick in corners):
        raise SequenceFormatError("corner tick does not fit in u32")
    return b"".join(
        (
            header.pack(MAGIC),
            struct.pack(f"<{len(corners)}I", *corners),
            pack_amplitudes(schedule.amplitudes_q1),
            pack_amplitudes(schedule.amplitudes_q2),
        )
    )


def read_sequence(data: bytes) -> ControlSchedule:
    header = SequenceHeader.unpack(data, MAGIC)
    n_ticks = header.n_ticks
    corner_size = 8 * header.n_excursions
    width = payload_bytes(n_ticks)
    expected = HEADER.size + corner_size + 2 * width
    if len(data) != expected:
        raise SequenceFormatError(
            f"expected {expected} bytes for {n_ticks} ticks and "
            f"{header.n_excursions} excursions, got {len(data)}",
            expected=expected,
            actual=len(data),
        )
    ticks = struct.unpack_from(f"<{2 * header.n_excursions}I", data, HEADER.size)
    corners = list(zip(ticks[::2], ticks[1::2], strict=True))
    offset = HEADER.size + corner_size
    q1 = unpack_amplitudes(data[offset : offset + width], n_ticks)
    q2 = unpack_amplitudes(data[offset + width :], n_ticks)
    try:
        schedule = header.schedule(corners, q1, q2)
    except ContractViolationError as exc:
        raise SequenceFormatError(f"decoded schedule is invalid: {exc.message}") from exc
    logger.debug("read %d ticks, %d excursions", n_ticks, header.n_excursions)
    return schedule
