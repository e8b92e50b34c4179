import math

import numpy as np
import pytest
from scipy import constants
from sfqsim.device.charge_basis import charge_basis_operators
from sfqsim.device.circuit import (
    build_capacitance_matrix,
    charging_energy,
    josephson_energy,
    josephson_terms,
    mode_index,
    single_mode_hamiltonian,
)
from sfqsim.shared.errors import ContractViolationError, InvalidCircuitError
from sfqsim.shared.schemas import CircuitParams


def test_reference_capacitance_matrix() -> None:
    matrix = build_capacitance_matrix(CircuitParams())

    np.testing.assert_allclose(np.diag(matrix), [72.25, 64.0, 72.25])
    assert matrix[0, 1] == -2.0
    assert matrix[0, 2] == -0.25
    assert np.array_equal(matrix, matrix.T)


def test_decoupled_capacitance_matrix_is_diagonal() -> None:
    params = CircuitParams().decoupled()

    np.testing.assert_array_equal(
        build_capacitance_matrix(params), np.diag([params.C1, params.Cc, params.C2])
    )


def test_capacitance_matrix_inverts_cleanly() -> None:
    matrix = build_capacitance_matrix(CircuitParams())

    np.testing.assert_allclose(matrix @ np.linalg.inv(matrix), np.eye(3), atol=1e-12)


def test_singular_capacitance_matrix_is_rejected() -> None:
    params = CircuitParams(C1=0.0, C12=0.0, C1c=0.0)

    with pytest.raises(InvalidCircuitError, match="singular"):
        build_capacitance_matrix(params)


def test_qubit_charging_energy_near_quarter_gigahertz() -> None:
    ec = charging_energy(CircuitParams()).EC

    assert ec[0, 0] / (2 * math.pi) == pytest.approx(0.27, abs=0.01)
    assert ec[0, 1] == ec[1, 0]
    assert np.linalg.eigvalsh(ec).min() > 0.0


def test_equal_diagonal_capacitances_give_scalar_charging_matrix() -> None:
    params = CircuitParams(C1=50.0, C2=50.0, Cc=50.0).decoupled()
    expected = constants.e**2 / (2 * 50e-15) / constants.hbar * 1e-9

    np.testing.assert_allclose(charging_energy(params).EC, expected * np.eye(3), rtol=1e-12)


def test_josephson_terms_at_aligned_and_antialigned_flux() -> None:
    params = CircuitParams()
    ej_left = josephson_energy(params.JL[1])
    ej_right = josephson_energy(params.JR[1])

    a_cos, a_sin = josephson_terms(params, "c", 0.0)
    assert a_cos == pytest.approx(ej_left + ej_right)
    assert a_sin == 0.0

    a_cos, a_sin = josephson_terms(params, "c", 0.5)
    assert a_cos == pytest.approx(ej_left - ej_right)
    assert a_sin == pytest.approx(0.0, abs=1e-12)


def test_josephson_energy_of_21_nanoamps() -> None:
    assert josephson_energy(21.0) / (2 * math.pi) == pytest.approx(10.43, abs=0.05)


@pytest.mark.parametrize("flux", [0.0, 0.13, 0.352, 0.7])
def test_josephson_terms_are_periodic(flux: float) -> None:
    params = CircuitParams()

    np.testing.assert_allclose(
        josephson_terms(params, "1", flux), josephson_terms(params, "1", flux + 1.0), atol=1e-12
    )


def test_unknown_mode_is_rejected() -> None:
    with pytest.raises(ContractViolationError, match="unknown mode"):
        josephson_terms(CircuitParams(), "3", 0.1)


def test_mode_index_accepts_labels() -> None:
    assert [mode_index(k) for k in ("1", "c", "2")] == [0, 1, 2]


def test_single_mode_hamiltonian_is_exactly_hermitian() -> None:
    h = single_mode_hamiltonian(CircuitParams(), "1", 0.13, charge_basis_operators(50))

    assert np.array_equal(h, h.conj().T)


def test_small_truncation_is_rejected() -> None:
    with pytest.raises(ContractViolationError, match="n_max"):
        single_mode_hamiltonian(CircuitParams(), "1", 0.13, charge_basis_operators(10))


def test_spectrum_converged_in_truncation() -> None:
    params = CircuitParams()

    def splitting(n_max: int) -> float:
        energies = np.linalg.eigvalsh(
            single_mode_hamiltonian(params, "1", 0.13, charge_basis_operators(n_max))
        )
        return energies[1] - energies[0]

    assert splitting(50) == pytest.approx(splitting(60), rel=1e-10)


def test_qubit_frequency_near_five_gigahertz() -> None:
    h = single_mode_hamiltonian(CircuitParams(), "1", 0.13, charge_basis_operators(50))
    energies = np.linalg.eigvalsh(h)

    assert (energies[1] - energies[0]) / (2 * math.pi) == pytest.approx(5.0, rel=0.05)


@pytest.mark.parametrize("k", ["1", "c", "2"])
def test_flux_reflection_preserves_spectrum(k: str) -> None:
    params = CircuitParams()
    ops = charge_basis_operators(50)

    forward = np.linalg.eigvalsh(single_mode_hamiltonian(params, k, 0.3, ops))
    reflected = np.linalg.eigvalsh(single_mode_hamiltonian(params, k, 0.7, ops))

    np.testing.assert_allclose(forward, reflected, rtol=1e-10, atol=1e-8)
