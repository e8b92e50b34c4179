"""Clock-period propagators at a fixed coupler flux.

A backend advances blocks of joint-space columns by one clock period with the
coupler held at a given flux. Kicks are applied by the caller.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any, ClassVar, Literal

import numpy as np
from sfqsim.device.circuit import split_junction_slopes
from sfqsim.device.model import DeviceModel
from sfqsim.device.table import FLUX_MATCH_TOLERANCE, FluxTable, flux_operator_table
from sfqsim.shared.errors import ContractViolationError, ScheduleModeError

from .tensor import (
    apply_product,
    exponential_derivative,
    trace_inner,
    unitary_exponential,
)

logger = logging.getLogger(__name__)

BackendName = Literal["exact-segment", "trotter4"]

SUZUKI_P = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))
# Second-order sweeps composed into one fourth-order step.
SUZUKI_WEIGHTS = (SUZUKI_P, SUZUKI_P, 1.0 - 4.0 * SUZUKI_P, SUZUKI_P, SUZUKI_P)

Part = Literal["A", "B"]


class PropagatorBackend(ABC):
    supports_relaxed: ClassVar[bool] = False

    def __init__(self, device: DeviceModel, period: float) -> None:
        if period <= 0.0:
            raise ContractViolationError("clock period must be positive")
        self.device = device
        self.period = period
        self.levels = device.levels

    @property
    @abstractmethod
    def name(self) -> str: ...

    @abstractmethod
    def apply(self, states: np.ndarray, flux: float) -> np.ndarray:
        """U(flux) @ states for one clock period."""

    @abstractmethod
    def apply_adjoint(self, costates: np.ndarray, flux: float) -> np.ndarray:
        """U(flux)^dagger @ costates."""

    def flux_gradient(
        self, states: np.ndarray, costates: np.ndarray, flux: float
    ) -> float:
        """2 Re Tr(costates^dagger dU/dflux states)."""
        raise ScheduleModeError(f"the {self.name} backend has no flux derivative")

    def matches_period(self, period: float) -> bool:
        return math.isclose(self.period, period, rel_tol=1e-12, abs_tol=0.0)


class ExactSegmentBackend(PropagatorBackend):
    """Dense exp(-i H(flux) T) looked up in a precomputed flux table."""

    def __init__(
        self,
        device: DeviceModel,
        period: float,
        *,
        table: FluxTable | None = None,
        flux_levels: Sequence[float] | np.ndarray = (),
    ) -> None:
        super().__init__(device, period)
        if table is None:
            levels = np.asarray(flux_levels, dtype=float)
            if levels.size == 0:
                levels = np.array([device.coupler_off])
            table = flux_operator_table(device.basis, device.charging, levels, period)
        elif not self.matches_period(table.period):
            raise ContractViolationError(
                f"flux table built for period {table.period} ns, schedule needs {period} ns"
            )
        self.table = table

    @property
    def name(self) -> str:
        return "exact-segment"

    def apply(self, states: np.ndarray, flux: float) -> np.ndarray:
        return self.table.propagator(flux) @ states

    def apply_adjoint(self, costates: np.ndarray, flux: float) -> np.ndarray:
        return self.table.propagator(flux).conj().T @ costates


def suzuki_sequence(substeps: int) -> tuple[tuple[Part, float], ...]:
    """Fourth-order Suzuki product for one period as (part, fraction of period).

    A is the sum of single-mode terms and B the charge coupling. Adjacent
    A factors are merged.
    """
    if substeps < 1:
        raise ContractViolationError("substeps must be at least 1")
    sequence: list[tuple[Part, float]] = []
    for _ in range(substeps):
        for weight in SUZUKI_WEIGHTS:
            for part, fraction in (("A", weight / 2), ("B", weight), ("A", weight / 2)):
                fraction /= substeps
                if sequence and part == "A" and sequence[-1][0] == "A":
                    sequence[-1] = ("A", sequence[-1][1] + fraction)
                else:
                    sequence.append((part, fraction))  # type: ignore[arg-type]
    return tuple(sequence)


class TrotterBackend(PropagatorBackend):
    """Fourth-order Suzuki-Trotter period propagator with flux derivatives.

    Ticks at one of ``fused_levels`` use a cached dense product; other fluxes
    are applied factor by factor.
    """

    supports_relaxed = True

    def __init__(
        self,
        device: DeviceModel,
        period: float,
        *,
        substeps: int = 4,
        fused_levels: Sequence[float] | np.ndarray = (),
    ) -> None:
        super().__init__(device, period)
        self.substeps = substeps
        self.sequence = suzuki_sequence(substeps)
        basis = device.basis
        self._coupler = basis.modes[1]
        phi1, _, phi2 = basis.reference_fluxes
        self._qubits = tuple(
            np.linalg.eigh(_hermitian(mode.hamiltonian(flux)))
            for mode, flux in ((basis.modes[0], phi1), (basis.modes[2], phi2))
        )
        self._coupling = np.linalg.eigh(device.coupling)

        self._qubit_factors: dict[float, tuple[np.ndarray, np.ndarray]] = {}
        self._coupling_factors: dict[float, np.ndarray] = {}
        for part, fraction in self.sequence:
            time = fraction * period
            if part == "A" and time not in self._qubit_factors:
                self._qubit_factors[time] = (
                    unitary_exponential(*self._qubits[0], time),
                    unitary_exponential(*self._qubits[1], time),
                )
            elif part == "B" and time not in self._coupling_factors:
                self._coupling_factors[time] = unitary_exponential(*self._coupling, time)

        self._fused: dict[float, np.ndarray] = {}
        identity = np.eye(device.dimension, dtype=complex)
        for flux in np.unique(np.asarray(fused_levels, dtype=float)):
            self._fused[float(flux)] = self._apply_factors(identity, float(flux))
        logger.debug(
            "trotter4 backend: %d substeps, %d factors, %d fused levels",
            substeps,
            len(self.sequence),
            len(self._fused),
        )

    @property
    def name(self) -> str:
        return "trotter4"

    def coupler_hamiltonian(self, flux: float) -> np.ndarray:
        return _hermitian(self._coupler.hamiltonian(flux))

    def coupler_hamiltonian_slope(self, flux: float) -> np.ndarray:
        da_cos, da_sin = split_junction_slopes(self._coupler.ej_right, flux)
        return _hermitian(-da_cos * self._coupler.cos - da_sin * self._coupler.sin)

    def _fused_propagator(self, flux: float) -> np.ndarray | None:
        for level, propagator in self._fused.items():
            if abs(level - flux) <= FLUX_MATCH_TOLERANCE:
                return propagator
        return None

    def _factors(self, flux: float) -> list[tuple[Part, Any]]:
        coupler = np.linalg.eigh(self.coupler_hamiltonian(flux))
        exponentials: dict[float, np.ndarray] = {}
        factors: list[tuple[Part, Any]] = []
        for part, fraction in self.sequence:
            time = fraction * self.period
            if part == "A":
                if time not in exponentials:
                    exponentials[time] = unitary_exponential(*coupler, time)
                q1, q2 = self._qubit_factors[time]
                factors.append(("A", (q1, exponentials[time], q2)))
            else:
                factors.append(("B", self._coupling_factors[time]))
        return factors

    def _apply_factors(self, states: np.ndarray, flux: float) -> np.ndarray:
        for part, factor in self._factors(flux):
            if part == "A":
                states = apply_product(factor, states, self.levels)
            else:
                states = factor @ states
        return states

    def apply(self, states: np.ndarray, flux: float) -> np.ndarray:
        fused = self._fused_propagator(flux)
        if fused is not None:
            return fused @ states
        return self._apply_factors(states, flux)

    def apply_adjoint(self, costates: np.ndarray, flux: float) -> np.ndarray:
        fused = self._fused_propagator(flux)
        if fused is not None:
            return fused.conj().T @ costates
        for part, factor in reversed(self._factors(flux)):
            if part == "A":
                costates = apply_product(
                    tuple(op.conj().T for op in factor), costates, self.levels
                )
            else:
                costates = factor.conj().T @ costates
        return costates

    def flux_gradient(
        self, states: np.ndarray, costates: np.ndarray, flux: float
    ) -> float:
        coupler_values, coupler_vectors = np.linalg.eigh(self.coupler_hamiltonian(flux))
        slope = self.coupler_hamiltonian_slope(flux)
        factors = self._factors(flux)

        inputs = []
        for part, factor in factors:
            inputs.append(states)
            if part == "A":
                states = apply_product(factor, states, self.levels)
            else:
                states = factor @ states

        derivatives: dict[float, np.ndarray] = {}
        gradient = 0.0
        for (part, factor), (_, fraction), before in zip(
            reversed(factors), reversed(self.sequence), reversed(inputs), strict=True
        ):
            if part == "A":
                q1, _, q2 = factor
                time = fraction * self.period
                if time not in derivatives:
                    derivatives[time] = exponential_derivative(
                        coupler_values, coupler_vectors, slope, time
                    )
                moved = apply_product((q1, derivatives[time], q2), before, self.levels)
                gradient += 2.0 * trace_inner(costates, moved).real
                costates = apply_product(
                    tuple(op.conj().T for op in factor), costates, self.levels
                )
            else:
                costates = factor.conj().T @ costates
        return gradient


def _hermitian(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


BACKEND_REGISTRY: dict[str, type[PropagatorBackend]] = {
    "exact-segment": ExactSegmentBackend,
    "trotter4": TrotterBackend,
}


class PropagatorFactory:
    @staticmethod
    def is_registered(backend: str) -> bool:
        return backend in BACKEND_REGISTRY

    @staticmethod
    def supports_relaxed(backend: str) -> bool:
        return PropagatorFactory.backend_class(backend).supports_relaxed

    @staticmethod
    def backend_class(backend: str) -> type[PropagatorBackend]:
        backend_class = BACKEND_REGISTRY.get(backend)
        if backend_class is None:
            raise ContractViolationError(
                f"unknown backend {backend!r}; choose from {sorted(BACKEND_REGISTRY)}"
            )
        return backend_class

    @staticmethod
    def create(
        backend: BackendName | str, device: DeviceModel, period: float, **kwargs: Any
    ) -> PropagatorBackend:
        return PropagatorFactory.backend_class(backend)(device, period, **kwargs)
