"""Precomputed joint Hamiltonians and clock-period propagators per coupler flux."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from sfqsim.shared.errors import ContractViolationError

from .basis import SpectralBasis, joint_hamiltonian
from .circuit import ChargingMatrix

logger = logging.getLogger(__name__)

FLUX_MATCH_TOLERANCE = 1e-12


def ramp_levels(flux_off: float, flux_on: float, n_ramp: int) -> np.ndarray:
    """The n_ramp + 1 staircase levels from ``flux_off`` to ``flux_on`` inclusive."""
    if n_ramp < 1:
        raise ContractViolationError("n_ramp must be at least 1")
    return flux_off + (flux_on - flux_off) * np.arange(n_ramp + 1) / n_ramp


def exact_propagator(hamiltonian: np.ndarray, time: float) -> np.ndarray:
    """exp(-i H t) via the eigendecomposition of the Hermitian ``hamiltonian``."""
    energies, vectors = np.linalg.eigh(hamiltonian)
    return (vectors * np.exp(-1j * energies * time)) @ vectors.conj().T


@dataclass(frozen=True)
class FluxTable:
    flux_levels: np.ndarray
    hamiltonians: tuple[np.ndarray, ...]
    propagators: tuple[np.ndarray, ...]
    period: float

    def __len__(self) -> int:
        return len(self.flux_levels)

    def index_of(self, flux: float) -> int | None:
        """Position of ``flux`` in the table, or None when it is off-grid."""
        distance = np.abs(self.flux_levels - flux)
        index = int(np.argmin(distance))
        if distance[index] <= FLUX_MATCH_TOLERANCE:
            return index
        return None

    def propagator(self, flux: float) -> np.ndarray:
        index = self.index_of(flux)
        if index is None:
            raise ContractViolationError(f"coupler flux {flux:.12g} is not in the table")
        return self.propagators[index]


def flux_operator_table(
    basis: SpectralBasis,
    charging: ChargingMatrix,
    flux_levels: Sequence[float] | np.ndarray,
    period: float,
) -> FluxTable:
    """Joint Hamiltonian and exp(-i H T) at every coupler flux in ``flux_levels``.

    The qubit fluxes stay at the basis reference point.
    """
    levels = np.asarray(flux_levels, dtype=float)
    if levels.size == 0:
        raise ContractViolationError("flux_levels must not be empty")
    if np.any((levels < 0.0) | (levels >= 1.0)):
        raise ContractViolationError("coupler fluxes must lie in [0, 1) Phi0")
    if period <= 0.0:
        raise ContractViolationError("clock period must be positive")

    phi1, _, phi2 = basis.reference_fluxes
    hamiltonians = []
    propagators = []
    for flux in levels:
        hamiltonian = joint_hamiltonian(basis, charging, (phi1, float(flux), phi2))
        hamiltonians.append(hamiltonian)
        propagators.append(exact_propagator(hamiltonian, period))
    logger.debug("flux table with %d levels, period %.4g ns", levels.size, period)
    levels.setflags(write=False)
    return FluxTable(
        flux_levels=levels,
        hamiltonians=tuple(hamiltonians),
        propagators=tuple(propagators),
        period=period,
    )
