"""Immutable bundle of everything the simulators need about one device."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from sfqsim.shared.schemas import BasisSettings, CircuitParams

from .basis import SpectralBasis, build_spectral_basis, coupling_hamiltonian, joint_hamiltonian
from .circuit import ChargingMatrix, charging_energy
from .frame import DEFAULT_DEGENERACY_THRESHOLD, LogicalFrame, build_logical_frame
from .table import FluxTable, flux_operator_table, ramp_levels

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeviceModel:
    params: CircuitParams
    charging: ChargingMatrix
    basis: SpectralBasis
    coupling: np.ndarray
    h_idle: np.ndarray
    frame: LogicalFrame

    @property
    def phi_off(self) -> tuple[float, float, float]:
        return self.params.phi_off

    @property
    def phi_on(self) -> tuple[float, float, float]:
        return self.params.phi_on

    @property
    def levels(self) -> int:
        return self.basis.levels

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def coupler_off(self) -> float:
        return self.params.phi_off[1]

    @property
    def coupler_on(self) -> float:
        return self.params.phi_on[1]

    def transition_charge(self, qubit: int) -> float:
        """|<1|n|0>| of qubit 1 or 2 in the idle basis."""
        return self.basis.modes[0 if qubit == 1 else 2].transition_charge()

    def hamiltonian(self, coupler_flux: float) -> np.ndarray:
        phi1, _, phi2 = self.phi_off
        return joint_hamiltonian(self.basis, self.charging, (phi1, coupler_flux, phi2))

    def ramp_levels(self, n_ramp: int) -> np.ndarray:
        return ramp_levels(self.coupler_off, self.coupler_on, n_ramp)

    def flux_table(
        self, period: float, n_ramp: int, extra_levels: Sequence[float] = ()
    ) -> FluxTable:
        levels = np.union1d(self.ramp_levels(n_ramp), np.asarray(extra_levels, dtype=float))
        return flux_operator_table(self.basis, self.charging, levels, period)


def build_device(
    params: CircuitParams,
    phi_off: tuple[float, float, float] | None = None,
    phi_on: tuple[float, float, float] | None = None,
    *,
    basis: BasisSettings | None = None,
    degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD,
) -> DeviceModel:
    """Build the idle-point basis, idle Hamiltonian and logical frame."""
    basis_settings = basis or BasisSettings()
    params = params.with_fluxes(phi_off=phi_off, phi_on=phi_on)
    charging = charging_energy(params)
    spectral = build_spectral_basis(
        params,
        params.phi_off,
        levels=basis_settings.levels,
        n_max=basis_settings.n_max,
        charging=charging,
    )
    h_idle = joint_hamiltonian(spectral, charging, params.phi_off)
    frame = build_logical_frame(
        h_idle, spectral.levels, degeneracy_threshold=degeneracy_threshold
    )
    logger.info(
        "device built: %d levels per mode, idle fluxes %s", spectral.levels, params.phi_off
    )
    return DeviceModel(
        params=params,
        charging=charging,
        basis=spectral,
        coupling=coupling_hamiltonian(spectral, charging),
        h_idle=h_idle,
        frame=frame,
    )
