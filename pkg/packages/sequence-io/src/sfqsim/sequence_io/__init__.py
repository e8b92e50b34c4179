from typing import Literal

from sfqsim.control.schedule import ControlSchedule
from sfqsim.shared.errors import SequenceFormatError

from sfqsim.sequence_io.bits import BitReader, BitWriter
from sfqsim.sequence_io.compressed import (
    CompressionStats,
    compress_sequence,
    compressed_bits_per_qubit,
    decompress_sequence,
    slots_per_period,
)
from sfqsim.sequence_io.header import SequenceHeader
from sfqsim.sequence_io.raw import read_sequence, write_sequence

SequenceFormat = Literal["raw", "compressed"]

_MAGICS: dict[bytes, SequenceFormat] = {b"SFQ1": "raw", b"SFQZ": "compressed"}


def detect_format(data: bytes) -> SequenceFormat:
    try:
        return _MAGICS[bytes(data[:4])]
    except KeyError:
        raise SequenceFormatError(f"unknown sequence magic {bytes(data[:4])!r}") from None


def load_sequence(data: bytes) -> ControlSchedule:
    """Decode either format, chosen by the leading magic."""
    if detect_format(data) == "raw":
        return read_sequence(data)
    return decompress_sequence(data)


def dump_sequence(
    schedule: ControlSchedule, fmt: SequenceFormat = "raw", *, qubit_freq: float = 5.0
) -> bytes:
    if fmt == "raw":
        return write_sequence(schedule)
    return compress_sequence(schedule, qubit_freq)


__all__ = [
    # Formats
    "SequenceFormat",
    "detect_format",
    "dump_sequence",
    "load_sequence",
    # Raw
    "read_sequence",
    "write_sequence",
    # Compressed
    "CompressionStats",
    "compress_sequence",
    "compressed_bits_per_qubit",
    "decompress_sequence",
    "slots_per_period",
    # Building blocks
    "BitReader",
    "BitWriter",
    "SequenceHeader",
]
