import math

import numpy as np
import pytest
from scipy.stats import unitary_group
from sfqsim.control.fidelity import (
    average_gate_fidelity,
    best_z_phases,
    evaluate_schedule,
    logical_report,
    rz_pair,
)
from sfqsim.control.propagator import propagate
from sfqsim.control.schedule import ControlSchedule, idle_schedule
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import ContractViolationError
from sfqsim.shared.schemas import ScheduleTemplate

CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def _angle_distance(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def test_ideal_matrix_has_unit_fidelity() -> None:
    target = unitary_group.rvs(4, random_state=1)

    report = logical_report(target, target, 1.0, z_compensate=False)

    assert report.fidelity == pytest.approx(1.0, abs=1e-12)
    assert report.leakage == pytest.approx(0.0, abs=1e-12)


def test_complete_leakage_has_zero_fidelity() -> None:
    report = logical_report(np.zeros((4, 4), dtype=complex), CZ, 1.0)

    assert report.fidelity == 0.0
    assert report.raw_fidelity == 0.0
    assert report.leakage == pytest.approx(1.0)


def test_global_phase_does_not_change_fidelity() -> None:
    target = unitary_group.rvs(4, random_state=2)

    report = logical_report(np.exp(0.83j) * target, target, 1.0, z_compensate=False)

    assert report.fidelity == pytest.approx(1.0, abs=1e-12)


def test_z_compensation_recovers_single_qubit_phases() -> None:
    target = unitary_group.rvs(4, random_state=3)
    matrix = rz_pair(0.7, 1.9) @ target

    report = logical_report(matrix, target, 1.0)

    assert report.raw_fidelity < 0.99
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)
    assert _angle_distance(report.phi_z1, 0.7) < 1e-6
    assert _angle_distance(report.phi_z2, 1.9) < 1e-6
    np.testing.assert_allclose(report.compensated_target(target), matrix, atol=1e-6)


def test_compensated_fidelity_never_below_raw() -> None:
    rng = np.random.default_rng(4)
    for seed in range(10):
        target = unitary_group.rvs(4, random_state=seed)
        # Contracted, non-unitary logical block as produced by leakage.
        matrix = 0.95 * unitary_group.rvs(4, random_state=100 + seed)
        matrix = matrix + 0.02 * rng.standard_normal((4, 4))

        report = logical_report(matrix, target, 1.0)

        assert report.fidelity >= report.raw_fidelity
        assert 0.0 <= report.fidelity <= 1.0


def test_best_z_phases_of_diagonal_phase_gate() -> None:
    phases = np.exp(1j * np.array([0.0, 0.4, -0.4, 0.0]))
    phi_z1, phi_z2, overlap = best_z_phases(np.diag(phases), np.eye(4))

    assert overlap == pytest.approx(16.0, abs=1e-9)
    np.testing.assert_allclose(
        rz_pair(phi_z1, phi_z2) * np.exp(-1j * np.angle(rz_pair(phi_z1, phi_z2)[0, 0])),
        np.diag(phases),
        atol=1e-6,
    )


@pytest.mark.parametrize(
    "target",
    [np.eye(3), np.eye(4) * 1.01, np.ones((4, 4))],
    ids=["shape", "scaled", "singular"],
)
def test_non_unitary_target_is_rejected(target: np.ndarray) -> None:
    with pytest.raises(ContractViolationError):
        logical_report(np.eye(4, dtype=complex), target, 1.0)


def test_average_gate_fidelity_projects_and_rotates(reference_device: DeviceModel) -> None:
    frame = reference_device.frame
    duration = 2.0
    # Stationary phases exactly undone by the frame rotation.
    unitary = frame.states @ np.diag(np.exp(-1j * frame.energies * duration)) @ frame.projector

    report = average_gate_fidelity(unitary, np.eye(4), frame, duration, z_compensate=False)

    assert report.fidelity == pytest.approx(1.0, abs=1e-10)
    assert report.duration == duration


def test_idling_is_identity_up_to_residual_coupling(reference_device: DeviceModel) -> None:
    template = ScheduleTemplate(duration=10.0, excursions=0)
    schedule = idle_schedule(template, reference_device.coupler_off, reference_device.coupler_on)

    report = evaluate_schedule(schedule, reference_device, np.eye(4))

    assert report.infidelity < 1e-4
    assert report.leakage < 1e-8


def test_trailing_idle_ticks_keep_fidelity(reference_device: DeviceModel) -> None:
    rng = np.random.default_rng(8)
    kicks = (rng.random((2, 60)) < 0.3).astype(float)
    padded = np.concatenate([kicks, np.zeros((2, 20))], axis=1)

    def schedule(amplitudes: np.ndarray) -> ControlSchedule:
        return ControlSchedule(
            clock_freq=20.0,
            duration=amplitudes.shape[1] / 20.0,
            kick_angle=math.pi / 100,
            amplitudes_q1=amplitudes[0],
            amplitudes_q2=amplitudes[1],
            flux_off=reference_device.coupler_off,
            flux_on=reference_device.coupler_on,
        )

    short = schedule(kicks)
    target = average_gate_fidelity(
        propagate(short, reference_device, "exact-segment"),
        np.eye(4),
        reference_device.frame,
        short.frame_duration,
    ).matrix
    # Nearest unitary to the reached block, used as the target for both.
    u, _, vh = np.linalg.svd(target)
    target = u @ vh

    before = evaluate_schedule(short, reference_device, target)
    after = evaluate_schedule(schedule(padded), reference_device, target)

    assert abs(after.fidelity - before.fidelity) < 1e-4


def test_summary_serializes_matrix_as_pairs() -> None:
    report = logical_report(1j * np.eye(4), np.eye(4), 3.0)

    summary = report.summary("identity")

    assert summary.target == "identity"
    assert summary.matrix[0][0] == (0.0, 1.0)
    assert summary.duration == 3.0
