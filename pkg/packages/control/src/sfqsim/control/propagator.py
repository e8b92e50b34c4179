"""Time-ordered evolution under SFQ kicks and piecewise-constant coupler flux.

Each clock tick applies the qubit-1 kick, the qubit-2 kick, then one period
of free evolution at the tick's coupler flux.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from sfqsim.device.basis import SpectralBasis
from sfqsim.device.model import DeviceModel
from sfqsim.device.table import FluxTable, ramp_levels
from sfqsim.shared.errors import ContractViolationError, ScheduleModeError

from .backends import (
    BackendName,
    PropagatorBackend,
    PropagatorFactory,
)
from .schedule import ControlSchedule
from .tensor import apply_local

logger = logging.getLogger(__name__)

QUBIT_POSITIONS = {1: 0, 2: 2}


class KickOperators:
    """exp(-i a lambda_k n_k) on qubit k, with lambda_k fixed by the idle basis."""

    def __init__(self, basis: SpectralBasis, kick_angle: float) -> None:
        self.levels = basis.levels
        self.kick_angle = kick_angle
        self._charges: dict[int, np.ndarray] = {}
        self._strengths: dict[int, float] = {}
        self._eigen: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for qubit, position in QUBIT_POSITIONS.items():
            mode = basis.modes[position]
            charge = mode.n
            self._charges[qubit] = charge
            self._strengths[qubit] = kick_angle / (2.0 * mode.transition_charge())
            self._eigen[qubit] = np.linalg.eigh(charge)

    def strength(self, qubit: int) -> float:
        return self._strengths[qubit]

    def charge(self, qubit: int) -> np.ndarray:
        return self._charges[qubit]

    def factor(self, qubit: int, amplitude: float) -> np.ndarray:
        """Single-mode kick unitary."""
        values, vectors = self._eigen[qubit]
        phases = np.exp(-1j * amplitude * self._strengths[qubit] * values)
        return (vectors * phases) @ vectors.conj().T

    def apply(
        self, states: np.ndarray, qubit: int, amplitude: float, *, adjoint: bool = False
    ) -> np.ndarray:
        if amplitude == 0.0:
            return states
        factor = self.factor(qubit, amplitude)
        if adjoint:
            factor = factor.conj().T
        return apply_local(factor, states, QUBIT_POSITIONS[qubit], self.levels)

    def apply_charge(self, states: np.ndarray, qubit: int) -> np.ndarray:
        return apply_local(self._charges[qubit], states, QUBIT_POSITIONS[qubit], self.levels)


def kick_unitary(
    basis: SpectralBasis, qubit: int, amplitude: float, kick_angle: float
) -> np.ndarray:
    """Dense joint-space unitary of one kick on ``qubit``."""
    if qubit not in QUBIT_POSITIONS:
        raise ContractViolationError(f"qubit must be 1 or 2, got {qubit}")
    if not 0.0 <= amplitude <= 1.0:
        raise ContractViolationError(f"kick amplitude {amplitude} outside [0, 1]")
    factor = KickOperators(basis, kick_angle).factor(qubit, amplitude)
    return basis.embed(factor, QUBIT_POSITIONS[qubit])


def resolve_backend(
    schedule: ControlSchedule,
    device: DeviceModel,
    backend: BackendName | str | PropagatorBackend = "exact-segment",
    *,
    table: FluxTable | None = None,
    substeps: int | None = None,
) -> PropagatorBackend:
    """Backend instance suited to ``schedule``'s period, fluxes and mode."""
    if isinstance(backend, PropagatorBackend):
        if schedule.mode == "relaxed" and not backend.supports_relaxed:
            raise ScheduleModeError(
                f"the {backend.name} backend needs a discrete-mode schedule"
            )
        if not backend.matches_period(schedule.period):
            raise ContractViolationError(
                f"backend period {backend.period} ns does not match {schedule.period} ns"
            )
        return backend

    if schedule.mode == "relaxed" and not PropagatorFactory.supports_relaxed(backend):
        raise ScheduleModeError(f"the {backend} backend needs a discrete-mode schedule")
    if schedule.excursions:
        levels = ramp_levels(schedule.flux_off, schedule.flux_on, schedule.n_ramp)
    else:
        levels = np.array([schedule.flux_off])
    if backend == "exact-segment":
        return PropagatorFactory.create(
            backend, device, schedule.period, table=table, flux_levels=levels
        )
    if schedule.mode == "relaxed":
        levels = np.array([schedule.flux_off, schedule.flux_on])
    return PropagatorFactory.create(
        backend, device, schedule.period, substeps=substeps or 4, fused_levels=levels
    )


@dataclass(frozen=True)
class ForwardPass:
    """States at the start of every tick plus the final states."""

    states: list[np.ndarray]
    fluxes: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def evolve(
    schedule: ControlSchedule,
    backend: PropagatorBackend,
    kicks: KickOperators,
    initial: np.ndarray,
    *,
    keep_states: bool = False,
) -> ForwardPass:
    fluxes = schedule.tick_fluxes()
    states = initial
    history = [states] if keep_states else []
    for a1, a2, flux in zip(
        schedule.amplitudes_q1, schedule.amplitudes_q2, fluxes, strict=True
    ):
        states = kicks.apply(states, 1, float(a1))
        states = kicks.apply(states, 2, float(a2))
        states = backend.apply(states, float(flux))
        if keep_states:
            history.append(states)
    if not keep_states:
        history = [states]
    return ForwardPass(states=history, fluxes=fluxes)


def propagate(
    schedule: ControlSchedule,
    device: DeviceModel,
    backend: BackendName | str | PropagatorBackend = "exact-segment",
    *,
    table: FluxTable | None = None,
    substeps: int | None = None,
) -> np.ndarray:
    """Full joint-space propagator of ``schedule``."""
    engine = resolve_backend(schedule, device, backend, table=table, substeps=substeps)
    kicks = KickOperators(device.basis, schedule.kick_angle)
    identity = np.eye(device.dimension, dtype=complex)
    return evolve(schedule, engine, kicks, identity).final


def propagate_logical(
    schedule: ControlSchedule,
    device: DeviceModel,
    backend: BackendName | str | PropagatorBackend = "exact-segment",
    *,
    table: FluxTable | None = None,
    substeps: int | None = None,
) -> np.ndarray:
    """U @ P^dagger: the evolved logical columns, shape (levels**3, 4)."""
    engine = resolve_backend(schedule, device, backend, table=table, substeps=substeps)
    kicks = KickOperators(device.basis, schedule.kick_angle)
    return evolve(schedule, engine, kicks, device.frame.states).final


def logical_matrix(
    device: DeviceModel, schedule: ControlSchedule, columns: np.ndarray
) -> np.ndarray:
    """M = R(frame duration) P U P^dagger from evolved logical columns."""
    frame = device.frame
    return frame.rotation(schedule.frame_duration) @ (frame.projector @ columns)
