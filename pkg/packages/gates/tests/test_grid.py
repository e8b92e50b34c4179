import math

from sfqsim.device.model import DeviceModel
from sfqsim.gates.grid import single_qubit_grid
from sfqsim.shared.schemas import OptimizerSettings, PenaltyConfig

TINY_SETTINGS = OptimizerSettings(penalty=PenaltyConfig(stages=2, updates_per_stage=2))


def test_grid_reports_every_point(reference_device: DeviceModel) -> None:
    pairs = [(20.0, math.pi / 100), (40.0, 4.0)]

    rows = single_qubit_grid(reference_device, pairs, [0.5, 1.0], TINY_SETTINGS, qubit=2)

    assert [(row.clock_freq, row.duration) for row in rows] == [
        (20.0, 0.5),
        (20.0, 1.0),
        (40.0, 0.5),
        (40.0, 1.0),
    ]
    for row in rows[:2]:
        assert row.status == "completed"
        assert row.fidelity is not None and 0.0 <= row.fidelity <= 1.0
    # A kick angle of 4 rad is outside (0, pi).
    for row in rows[2:]:
        assert row.status == "failed"
        assert row.fidelity is None
