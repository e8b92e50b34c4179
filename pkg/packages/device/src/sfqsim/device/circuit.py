"""Capacitance, charging and Josephson terms of the qubit-coupler-qubit circuit.

Energies are angular frequencies in rad/ns with hbar = 1; capacitances are in
fF, critical currents in nA and fluxes in units of the flux quantum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import constants
from sfqsim.shared.errors import ContractViolationError, InvalidCircuitError
from sfqsim.shared.schemas import CircuitParams

from .charge_basis import ChargeBasisOperators

FEMTOFARAD = 1e-15
NANOAMPERE = 1e-9
PER_SECOND_TO_PER_NS = 1e-9
MIN_CHARGE_TRUNCATION = 20


class Mode(str, Enum):
    QUBIT1 = "1"
    COUPLER = "c"
    QUBIT2 = "2"

    @property
    def index(self) -> int:
        return _MODE_INDEX[self]


_MODE_INDEX = {Mode.QUBIT1: 0, Mode.COUPLER: 1, Mode.QUBIT2: 2}
MODES = (Mode.QUBIT1, Mode.COUPLER, Mode.QUBIT2)


def mode_index(k: Mode | str) -> int:
    if isinstance(k, Mode):
        return k.index
    try:
        return Mode(str(k)).index
    except ValueError as exc:
        raise ContractViolationError(f"unknown mode {k!r}") from exc


@dataclass(frozen=True)
class ChargingMatrix:
    """Charging energies (E_C)_{k,l} in rad/ns, ordered (qubit 1, coupler, qubit 2)."""

    EC: np.ndarray

    def __post_init__(self) -> None:
        if self.EC.shape != (3, 3) or not np.array_equal(self.EC, self.EC.T):
            raise InvalidCircuitError("charging matrix must be symmetric 3x3")
        if np.linalg.eigvalsh(self.EC).min() <= 0.0:
            raise InvalidCircuitError("charging matrix must be positive definite")
        self.EC.setflags(write=False)

    def diagonal(self, k: Mode | str) -> float:
        i = mode_index(k)
        return float(self.EC[i, i])


def build_capacitance_matrix(params: CircuitParams) -> np.ndarray:
    p = params
    matrix = np.array(
        [
            [p.C1e + p.C1 + p.C1c + p.C12, -p.C1c, -p.C12],
            [-p.C1c, p.Cc + p.C1c + p.C2c, -p.C2c],
            [-p.C12, -p.C2c, p.C2e + p.C2 + p.C2c + p.C12],
        ]
    )
    scale = float(np.prod(np.abs(np.diag(matrix))))
    det = float(np.linalg.det(matrix))
    if scale == 0.0 or abs(det) < 1e-12 * scale:
        raise InvalidCircuitError(
            "capacitance matrix is singular", determinant=det
        )
    return matrix


def charging_energy(params: CircuitParams) -> ChargingMatrix:
    """EC = (e^2 / 2) * inv(M_C), converted to rad/ns."""
    inverse = np.linalg.inv(build_capacitance_matrix(params) * FEMTOFARAD)
    joules = 0.5 * constants.e**2 * inverse
    ec = joules / constants.hbar * PER_SECOND_TO_PER_NS
    return ChargingMatrix(EC=0.5 * (ec + ec.T))


def josephson_energy(critical_current_na: float) -> float:
    """E_J / hbar = I_c / (2e) for a single junction, in rad/ns."""
    return critical_current_na * NANOAMPERE / (2.0 * constants.e) * PER_SECOND_TO_PER_NS


def josephson_terms(
    params: CircuitParams, k: Mode | str, flux: float
) -> tuple[float, float]:
    """Coefficients of -a_cos*cos(phi) - a_sin*sin(phi) for a two-junction loop.

    The external flux sits entirely on the right junction.
    """
    i = mode_index(k)
    return split_junction_terms(
        josephson_energy(params.JL[i]), josephson_energy(params.JR[i]), flux
    )


def split_junction_terms(ej_left: float, ej_right: float, flux: float) -> tuple[float, float]:
    angle = 2.0 * math.pi * flux
    return ej_left + ej_right * math.cos(angle), ej_right * math.sin(angle)


def split_junction_slopes(ej_right: float, flux: float) -> tuple[float, float]:
    """Derivatives of (a_cos, a_sin) with respect to flux."""
    angle = 2.0 * math.pi * flux
    scale = 2.0 * math.pi * ej_right
    return -scale * math.sin(angle), scale * math.cos(angle)


def single_mode_hamiltonian(
    params: CircuitParams,
    k: Mode | str,
    flux: float,
    ops: ChargeBasisOperators,
    charging: ChargingMatrix | None = None,
) -> np.ndarray:
    if ops.n_max < MIN_CHARGE_TRUNCATION:
        raise ContractViolationError(
            f"charge truncation n_max={ops.n_max} below {MIN_CHARGE_TRUNCATION}"
        )
    charging = charging or charging_energy(params)
    a_cos, a_sin = josephson_terms(params, k, flux)
    n_sq = ops.n_op @ ops.n_op
    return 4.0 * charging.diagonal(k) * n_sq - a_cos * ops.cos_op - a_sin * ops.sin_op
