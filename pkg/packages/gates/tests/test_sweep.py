import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from sfqsim.device.model import DeviceModel
from sfqsim.gates.sweep import (
    best_row,
    calibrate_fsim,
    fsim_schedule,
    hold_grid,
    hold_time_sweep,
    local_minima,
    sweep_row,
)
from sfqsim.shared.errors import ContractViolationError
from sfqsim.shared.results import SweepRow


def _row(hold: float, infidelity: float, status: str = "completed") -> SweepRow:
    return SweepRow(
        hold_ns=hold,
        duration_ns=hold + 6.4,
        infidelity=infidelity,
        theta=0.0,
        phi=0.0,
        status=status,
    )


def test_fsim_schedule_adds_both_ramps(reference_device: DeviceModel) -> None:
    schedule = fsim_schedule(reference_device, 17.0)

    assert schedule.duration == pytest.approx(23.4)
    assert schedule.n_ticks == 468
    assert schedule.corner_ticks() == ((0, 468),)
    assert not schedule.amplitudes_q1.any()
    assert not schedule.amplitudes_q2.any()


@pytest.mark.parametrize("hold", [17.01, 0.0, -1.0])
def test_fsim_schedule_rejects_bad_hold_times(reference_device: DeviceModel, hold: float) -> None:
    with pytest.raises(ContractViolationError):
        fsim_schedule(reference_device, hold)


def test_short_hold_calibrates(reference_device: DeviceModel) -> None:
    calibration = calibrate_fsim(reference_device, 1.0)

    assert calibration.duration == pytest.approx(7.4)
    assert calibration.leakage < 1e-3
    assert calibration.params.fit_fidelity > 0.9
    np.testing.assert_allclose(
        calibration.matrix.conj().T @ calibration.matrix, np.eye(4), atol=1e-2
    )


def test_sweep_row_matches_calibration(reference_device: DeviceModel) -> None:
    row = sweep_row(reference_device, 1.0, 64, 0.05)
    calibration = calibrate_fsim(reference_device, 1.0)

    assert row.status == "completed"
    assert row.duration_ns == pytest.approx(7.4)
    assert row.infidelity == pytest.approx(1.0 - calibration.params.fit_fidelity)
    assert row.theta == pytest.approx(calibration.params.theta)


async def test_sweep_is_independent_of_workers(reference_device: DeviceModel) -> None:
    holds = [0.5, 1.0, 1.5]

    inline = await hold_time_sweep(reference_device, holds, ramp_steps=16)
    with ThreadPoolExecutor(max_workers=2) as pool:
        pooled = await hold_time_sweep(
            reference_device, holds, ramp_steps=16, workers=2, executor=pool
        )

    assert [row.hold_ns for row in inline] == holds
    assert pooled == inline


async def test_sweep_rejects_non_positive_holds(reference_device: DeviceModel) -> None:
    with pytest.raises(ContractViolationError):
        await hold_time_sweep(reference_device, [1.0, 0.0])


def test_hold_grid_is_inclusive() -> None:
    grid = hold_grid(5.0, 30.0, 0.25)

    assert len(grid) == 101
    assert grid[0] == 5.0
    assert grid[-1] == 30.0
    assert grid[3] == 5.75


def test_local_minima_skips_endpoints() -> None:
    rows = [_row(h, v) for h, v in enumerate([0.1, 0.3, 0.2, 0.4, 0.05, 0.5, 0.01])]

    minima = local_minima(rows)

    assert [row.hold_ns for row in minima] == [2, 4]


def test_best_row_ignores_failures() -> None:
    rows = [_row(1.0, 0.2), _row(2.0, math.nan, "failed"), _row(3.0, 0.1)]

    assert best_row(rows).hold_ns == 3.0
    with pytest.raises(ContractViolationError):
        best_row([rows[1]])


@pytest.mark.slow
async def test_quarter_swap_near_seventeen_nanoseconds(reference_device: DeviceModel) -> None:
    calibration = calibrate_fsim(reference_device, 17.0)

    assert abs(abs(calibration.params.theta) - math.pi / 4) < 0.05
    assert calibration.params.fit_fidelity > 0.999

    rows = await hold_time_sweep(reference_device, hold_grid(5.0, 30.0, 0.25))
    assert len(local_minima(rows)) >= 3
