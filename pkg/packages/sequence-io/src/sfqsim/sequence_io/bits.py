"""Bit streams with Elias gamma codes for positive integers."""

from __future__ import annotations

import numpy as np
from sfqsim.shared.errors import SequenceFormatError


class BitWriter:
    def __init__(self) -> None:
        self._bits: list[int] = []

    def __len__(self) -> int:
        return len(self._bits)

    def write_bit(self, bit: int) -> None:
        self._bits.append(1 if bit else 0)

    def write_bits(self, value: int, width: int) -> None:
        """``value`` in ``width`` bits, most significant first."""
        for shift in range(width - 1, -1, -1):
            self._bits.append((value >> shift) & 1)

    def write_gamma(self, value: int) -> None:
        """Elias gamma: n - 1 zeros then the n significant bits of ``value``."""
        if value < 1:
            raise ValueError(f"gamma codes need a positive integer, got {value}")
        width = value.bit_length()
        self._bits.extend([0] * (width - 1))
        self.write_bits(value, width)

    def to_bytes(self) -> bytes:
        return np.packbits(np.array(self._bits, dtype=np.uint8), bitorder="little").tobytes()


class BitReader:
    def __init__(self, data: bytes) -> None:
        self._bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
        self._position = 0

    @property
    def remaining(self) -> int:
        return self._bits.size - self._position

    def read_bit(self) -> int:
        if self._position >= self._bits.size:
            raise SequenceFormatError("bit stream ended early")
        bit = int(self._bits[self._position])
        self._position += 1
        return bit

    def read_bits(self, width: int) -> int:
        value = 0
        for _ in range(width):
            value = (value << 1) | self.read_bit()
        return value

    def read_gamma(self) -> int:
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
        return (1 << zeros) | self.read_bits(zeros)

    def check_padding(self) -> None:
        if self.remaining >= 8 or self._bits[self._position :].any():
            raise SequenceFormatError("trailing data after the bit stream")
