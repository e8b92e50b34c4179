"""Truncated per-mode eigenbases and the joint three-mode Hamiltonian.

All time-dependent physics is written in one fixed basis (built at a
reference flux point); flux changes enter through the scalar Josephson
coefficients that multiply the projected cos/sin operators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import reduce

import numpy as np
import scipy.linalg
from sfqsim.shared.errors import ContractViolationError, DegeneracyError
from sfqsim.shared.schemas import CircuitParams

from .charge_basis import ChargeBasisOperators, charge_basis_operators
from .circuit import (
    MODES,
    ChargingMatrix,
    charging_energy,
    josephson_energy,
    single_mode_hamiltonian,
    split_junction_terms,
)

logger = logging.getLogger(__name__)

DEGENERACY_TOLERANCE = 1e-9
_PHASE_FLOOR = 1e-12


@dataclass(frozen=True)
class ModeBasis:
    """Lowest eigenpairs of one mode and its operators projected onto them."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    n: np.ndarray
    n2: np.ndarray
    cos: np.ndarray
    sin: np.ndarray
    ej_left: float = 0.0
    ej_right: float = 0.0
    ec: float = 0.0
    flux_ref: float = 0.0

    @property
    def levels(self) -> int:
        return len(self.eigenvalues)

    def hamiltonian(self, flux: float) -> np.ndarray:
        """Mode Hamiltonian at ``flux`` expressed in this (fixed) basis."""
        a_cos, a_sin = split_junction_terms(self.ej_left, self.ej_right, flux)
        return 4.0 * self.ec * self.n2 - a_cos * self.cos - a_sin * self.sin

    def transition_charge(self) -> float:
        """|<1|n|0>|, the drive matrix element of the lowest transition."""
        return float(abs(self.n[1, 0]))


@dataclass(frozen=True)
class SpectralBasis:
    modes: tuple[ModeBasis, ModeBasis, ModeBasis]
    levels: int
    n_max: int
    reference_fluxes: tuple[float, float, float]

    @property
    def dimension(self) -> int:
        return self.levels**3

    def embed(self, operator: np.ndarray, position: int) -> np.ndarray:
        """Lift a single-mode operator into the joint (qubit 1, coupler, qubit 2) space."""
        eye = np.eye(self.levels)
        factors = [operator if i == position else eye for i in range(3)]
        return reduce(np.kron, factors)

    def bare_index(self, q1: int, c: int, q2: int) -> int:
        return (q1 * self.levels + c) * self.levels + q2


def _hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def _fix_phases(vectors: np.ndarray, charges: np.ndarray) -> np.ndarray:
    """Make <psi_i|n|psi_{i+1}> negative imaginary; anchor psi_0 on its largest entry."""
    vectors = vectors.astype(complex, copy=True)

    def anchor(column: int) -> None:
        j = int(np.argmax(np.abs(vectors[:, column])))
        value = vectors[j, column]
        vectors[:, column] *= abs(value) / value

    anchor(0)
    for i in range(vectors.shape[1] - 1):
        element = np.vdot(vectors[:, i], charges * vectors[:, i + 1])
        if abs(element) > _PHASE_FLOOR:
            vectors[:, i + 1] *= -1j * abs(element) / element
        else:
            anchor(i + 1)
    return vectors


def diagonalize_mode(
    hamiltonian: np.ndarray, levels: int, ops: ChargeBasisOperators | None = None
) -> ModeBasis:
    """Lowest ``levels`` eigenpairs with the phase convention and projected operators.

    ``ops`` defaults to the charge operators matching the (odd) dimension of
    ``hamiltonian``.
    """
    dim = hamiltonian.shape[0]
    if ops is None:
        if dim % 2 == 0:
            raise ContractViolationError("charge-basis dimension must be odd")
        ops = charge_basis_operators((dim - 1) // 2)
    if hamiltonian.shape != (dim, dim) or dim != ops.dimension:
        raise ContractViolationError("Hamiltonian does not match the charge basis")
    if not 1 <= levels <= dim:
        raise ContractViolationError(f"levels={levels} outside 1..{dim}")
    scale = max(1.0, float(np.abs(hamiltonian).max()))
    if np.abs(hamiltonian - hamiltonian.conj().T).max() > 1e-12 * scale:
        raise ContractViolationError("Hamiltonian is not Hermitian")

    eigenvalues, eigenvectors = scipy.linalg.eigh(
        hamiltonian, subset_by_index=[0, levels - 1]
    )
    gaps = np.diff(eigenvalues)
    if gaps.size and gaps.min() < DEGENERACY_TOLERANCE:
        index = int(np.argmin(gaps))
        raise DegeneracyError(
            f"levels {index} and {index + 1} are degenerate", gap=float(gaps[index])
        )

    vectors = _fix_phases(eigenvectors, ops.charges)
    adjoint = vectors.conj().T
    n_sq = ops.n_op @ ops.n_op
    return ModeBasis(
        eigenvalues=eigenvalues,
        eigenvectors=vectors,
        n=_hermitian_part(adjoint @ ops.n_op @ vectors),
        n2=_hermitian_part(adjoint @ n_sq @ vectors),
        cos=_hermitian_part(adjoint @ ops.cos_op @ vectors),
        sin=_hermitian_part(adjoint @ ops.sin_op @ vectors),
    )


def build_spectral_basis(
    params: CircuitParams,
    fluxes: tuple[float, float, float] | None = None,
    *,
    levels: int = 5,
    n_max: int = 50,
    charging: ChargingMatrix | None = None,
) -> SpectralBasis:
    """Per-mode bases at ``fluxes`` (default: the idle point)."""
    fluxes = tuple(float(f) for f in (fluxes or params.phi_off))  # type: ignore[assignment]
    charging = charging or charging_energy(params)
    ops = charge_basis_operators(n_max)
    modes = []
    for mode, flux in zip(MODES, fluxes, strict=True):
        i = mode.index
        hamiltonian = single_mode_hamiltonian(params, mode, flux, ops, charging)
        modes.append(
            replace(
                diagonalize_mode(hamiltonian, levels, ops),
                ej_left=josephson_energy(params.JL[i]),
                ej_right=josephson_energy(params.JR[i]),
                ec=float(charging.EC[i, i]),
                flux_ref=flux,
            )
        )
    logger.debug("built %d-level bases at fluxes %s", levels, fluxes)
    return SpectralBasis(
        modes=(modes[0], modes[1], modes[2]),
        levels=levels,
        n_max=n_max,
        reference_fluxes=fluxes,  # type: ignore[arg-type]
    )


def coupling_hamiltonian(basis: SpectralBasis, charging: ChargingMatrix) -> np.ndarray:
    """8 * sum_{k<l} (E_C)_{kl} n_k n_l in the joint basis."""
    dim = basis.dimension
    coupling = np.zeros((dim, dim), dtype=complex)
    charge = [basis.embed(mode.n, i) for i, mode in enumerate(basis.modes)]
    for k in range(3):
        for m in range(k + 1, 3):
            coupling += 8.0 * charging.EC[k, m] * (charge[k] @ charge[m])
    return _hermitian_part(coupling)


def local_hamiltonian(
    basis: SpectralBasis, fluxes: tuple[float, float, float]
) -> np.ndarray:
    """Sum of the single-mode terms at ``fluxes``."""
    total = np.zeros((basis.dimension, basis.dimension), dtype=complex)
    for i, (mode, flux) in enumerate(zip(basis.modes, fluxes, strict=True)):
        total += basis.embed(mode.hamiltonian(flux), i)
    return total


def joint_hamiltonian(
    basis: SpectralBasis,
    charging: ChargingMatrix,
    fluxes: tuple[float, float, float],
) -> np.ndarray:
    return _hermitian_part(
        local_hamiltonian(basis, fluxes) + coupling_hamiltonian(basis, charging)
    )


def rediagonalized_joint_hamiltonian(
    params: CircuitParams,
    charging: ChargingMatrix,
    fluxes: tuple[float, float, float],
    *,
    levels: int = 5,
    n_max: int = 50,
) -> np.ndarray:
    """Joint Hamiltonian in bases rebuilt at ``fluxes`` (cross-check oracle)."""
    basis = build_spectral_basis(
        params, fluxes, levels=levels, n_max=n_max, charging=charging
    )
    return joint_hamiltonian(basis, charging, fluxes)
