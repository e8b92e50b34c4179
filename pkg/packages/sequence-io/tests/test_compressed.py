import math

import numpy as np
import pytest
from sfqsim.control.schedule import ControlSchedule
from sfqsim.sequence_io import detect_format, dump_sequence, load_sequence
from sfqsim.sequence_io.bits import BitReader, BitWriter
from sfqsim.sequence_io.compressed import (
    compress_sequence,
    compressed_bits_per_qubit,
    decompress_sequence,
    slots_per_period,
)
from sfqsim.sequence_io.raw import read_sequence, write_sequence
from sfqsim.shared.errors import SequenceFormatError, UnsupportedRatioError

N_RAMP = 4


def _random_schedule(rng: np.random.Generator) -> ControlSchedule:
    clock, kick = [(20.0, math.pi / 100), (40.0, math.pi / 200)][rng.integers(2)]
    n_ticks = int(rng.integers(0, 300))
    # Sub-tick tails, some within a picosecond of the next tick.
    tail = rng.choice([0.0, rng.uniform(0.0, 0.999), 0.9999])
    density = rng.uniform(0.0, 1.0)
    corners = []
    count = int(rng.integers(0, 3))
    if count and n_ticks // count >= 2 * N_RAMP:
        slot = n_ticks // count
        for index in range(count):
            start = index * slot + int(rng.integers(0, slot - 2 * N_RAMP + 1))
            end = int(rng.integers(start + 2 * N_RAMP, (index + 1) * slot + 1))
            corners.append((start / clock, end / clock))
    return ControlSchedule(
        clock_freq=clock,
        duration=(n_ticks + tail) / clock,
        kick_angle=kick,
        amplitudes_q1=(rng.random(n_ticks) < density).astype(float),
        amplitudes_q2=(rng.random(n_ticks) < density).astype(float),
        excursions=tuple(corners),
        n_ramp=N_RAMP,
    )


def _periodic(n_periods: int, pattern: list[int], clock: float = 20.0) -> ControlSchedule:
    amplitudes = np.tile(np.array(pattern, dtype=float), n_periods)
    return ControlSchedule(
        clock_freq=clock,
        duration=amplitudes.size / clock,
        kick_angle=math.pi / 100,
        amplitudes_q1=amplitudes,
        amplitudes_q2=np.zeros(amplitudes.size),
    ).quantized()


@pytest.mark.parametrize("value, code", [(1, "1"), (2, "010"), (5, "00101"), (9, "0001001")])
def test_gamma_codes(value: int, code: str) -> None:
    writer = BitWriter()
    writer.write_gamma(value)

    bits = np.unpackbits(np.frombuffer(writer.to_bytes(), dtype=np.uint8), bitorder="little")

    assert "".join(str(bit) for bit in bits[: len(writer)]) == code
    assert BitReader(writer.to_bytes()).read_gamma() == value


def test_gamma_needs_positive_values() -> None:
    with pytest.raises(ValueError, match="positive"):
        BitWriter().write_gamma(0)


def test_bit_stream_ends() -> None:
    reader = BitReader(b"\x00")

    with pytest.raises(SequenceFormatError, match="ended early"):
        reader.read_gamma()


def test_randomized_round_trips_are_exact() -> None:
    rng = np.random.default_rng(2024)
    for case in range(1000):
        schedule = _random_schedule(rng)
        expected = schedule.quantized()

        assert read_sequence(write_sequence(schedule)) == expected, case
        assert decompress_sequence(compress_sequence(schedule)) == expected, case
        assert expected.n_ticks == schedule.n_ticks, case


def test_constant_slot_pattern_compresses_to_one_run_per_slot() -> None:
    # 70 ns at 20 GHz: 350 qubit periods of four slots.
    schedule = _periodic(350, [1, 0, 0, 0])

    stats = compressed_bits_per_qubit(schedule)

    # Per slot: first bit plus gamma(350), which takes 17 bits.
    assert stats.qubit_bits == (4 * 18, 4 * 18)
    assert stats.raw_bits == 1400
    assert stats.bits_per_qubit < 200
    assert stats.ratio == pytest.approx(72 / 1400)
    assert decompress_sequence(compress_sequence(schedule)) == schedule


def test_compressed_size_grows_logarithmically() -> None:
    short = compressed_bits_per_qubit(_periodic(64, [0, 1, 1, 0]))
    long = compressed_bits_per_qubit(_periodic(4096, [0, 1, 1, 0]))

    assert long.bits_per_qubit - short.bits_per_qubit == 4 * 12


def test_random_bits_may_grow_but_stay_lossless() -> None:
    rng = np.random.default_rng(9)
    amplitudes = rng.integers(0, 2, 8000).astype(float)
    schedule = ControlSchedule(
        clock_freq=40.0,
        duration=200.0,
        kick_angle=math.pi / 200,
        amplitudes_q1=amplitudes,
        amplitudes_q2=amplitudes[::-1].copy(),
    ).quantized()

    stats = compressed_bits_per_qubit(schedule)

    assert stats.bits_per_qubit > stats.raw_bits
    assert decompress_sequence(compress_sequence(schedule)) == schedule


def test_corner_ticks_survive_compression() -> None:
    n = 1400
    schedule = ControlSchedule(
        clock_freq=20.0,
        duration=70.0,
        kick_angle=math.pi / 100,
        amplitudes_q1=np.zeros(n),
        amplitudes_q2=np.zeros(n),
        excursions=((5.0, 30.0), (35.05, 65.0)),
        n_ramp=64,
    ).quantized()

    restored = decompress_sequence(compress_sequence(schedule))

    assert restored.corner_ticks() == ((100, 600), (701, 1300))


@pytest.mark.parametrize("clock, qubit, slots", [(20.0, 5.0, 4), (40.0, 5.0, 8), (25.0, 5.0, 5)])
def test_slots_per_period(clock: float, qubit: float, slots: int) -> None:
    assert slots_per_period(clock, qubit) == slots


def test_non_integer_ratio_is_unsupported() -> None:
    schedule = _periodic(10, [1, 0, 0, 0])

    with pytest.raises(UnsupportedRatioError) as excinfo:
        compress_sequence(schedule, qubit_freq=4.7)
    assert excinfo.value.error_id == "unsupported-ratio"


def test_trailing_garbage_is_rejected() -> None:
    data = compress_sequence(_periodic(10, [1, 0, 0, 0]))

    with pytest.raises(SequenceFormatError, match="trailing"):
        decompress_sequence(data + b"\xff")


def test_dump_and_load_dispatch_on_format() -> None:
    schedule = _periodic(25, [0, 0, 1, 0])

    compact = dump_sequence(schedule, "compressed")
    raw = dump_sequence(schedule)

    assert detect_format(compact) == "compressed"
    assert detect_format(raw) == "raw"
    assert load_sequence(compact) == load_sequence(raw) == schedule
    assert len(compact) < len(raw)
