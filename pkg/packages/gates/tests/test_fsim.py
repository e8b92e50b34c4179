import math

import numpy as np
import pytest
from scipy.linalg import expm
from sfqsim.gates.fsim import (
    arcsin_argument,
    assemble_cz,
    common_z,
    cz_class_fit,
    decomposition_angles,
    distance_to_cz_class,
    extract_fsim,
    gamma_gate,
    is_valid_pair,
)
from sfqsim.gates.standard import CNOT, CZ, PAULI_X, PAULI_Y, PAULI_Z
from sfqsim.shared.errors import (
    DegenerateInputError,
    FsimExtractionError,
    InvalidAnglesError,
)

XX_YY = (np.kron(PAULI_X, PAULI_X) + np.kron(PAULI_Y, PAULI_Y)) / 2
ZZ = np.kron(PAULI_Z, PAULI_Z)


def _angle_distance(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2 * math.pi))


def _valid_pairs(count: int, seed: int) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        theta, phi = rng.uniform(-math.pi, math.pi, size=2)
        # Keep clear of the sin(theta)^2 = sin(phi/2)^2 corner.
        if is_valid_pair(theta, phi) and abs(math.sin(theta) ** 2 - math.sin(phi / 2) ** 2) > 1e-6:
            pairs.append((float(theta), float(phi)))
    return pairs


def test_gamma_at_zero_is_identity() -> None:
    np.testing.assert_array_equal(gamma_gate(0.0, 0.0), np.eye(4))


def test_gamma_quarter_turn_swaps_single_excitations() -> None:
    gate = gamma_gate(math.pi / 2, 0.0)

    assert abs(gate[1, 2]) == pytest.approx(1.0)
    assert gate[0, 0] == 1.0
    assert gate[3, 3] == 1.0


@pytest.mark.parametrize("theta, phi", [(0.0, 0.7), (0.4, 0.1), (-2.1, 2.9), (1.3, -3.0)])
def test_gamma_matches_matrix_exponential(theta: float, phi: float) -> None:
    expected = expm(-1j * theta * XX_YY - 0.25j * phi * ZZ)

    np.testing.assert_allclose(gamma_gate(theta, phi), expected, atol=1e-13)


@pytest.mark.parametrize("phi", [2.0, 2.5, -2.2])
def test_quarter_swap_angle_gives_half_pi_alpha(phi: float) -> None:
    angles = decomposition_angles(math.pi / 4, phi)

    assert angles.alpha == pytest.approx(math.pi / 2, abs=1e-7)


@pytest.mark.parametrize("theta", [1.0, 2.0, -1.2])
def test_quarter_phase_gives_zero_alpha(theta: float) -> None:
    angles = decomposition_angles(theta, math.pi / 2)

    assert angles.alpha == pytest.approx(0.0, abs=1e-7)


def test_small_swap_large_phase_assembles_cz() -> None:
    angles = decomposition_angles(0.3, 2.0)

    cz = assemble_cz(0.3, 2.0, angles)

    assert distance_to_cz_class(cz) < 1e-10
    np.testing.assert_allclose(cz.conj().T @ cz, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("theta, phi", _valid_pairs(100, seed=7))
def test_valid_pairs_assemble_cz(theta: float, phi: float) -> None:
    cz = assemble_cz(theta, phi, decomposition_angles(theta, phi))

    assert distance_to_cz_class(cz) < 1e-10


def test_vanishing_phase_uses_limit_for_eta() -> None:
    angles = decomposition_angles(1.2, 0.0)

    assert abs(angles.eta) == pytest.approx(math.pi / 2)
    assert distance_to_cz_class(assemble_cz(1.2, 0.0, angles)) < 1e-10


def test_swap_angle_sign_is_load_bearing() -> None:
    angles = decomposition_angles(0.3, 2.0)

    assert distance_to_cz_class(assemble_cz(-0.3, 2.0, angles)) > 0.1


def test_invalid_pair_is_rejected() -> None:
    with pytest.raises(InvalidAnglesError, match="no CZ decomposition"):
        decomposition_angles(0.3, 0.5)


def test_exact_validity_corner_is_rejected() -> None:
    with pytest.raises(DegenerateInputError):
        decomposition_angles(math.pi / 4, math.pi / 2)


def test_validity_matches_arcsin_domain_on_grid() -> None:
    grid = np.linspace(-math.pi, math.pi, 200)
    mismatches = []
    for theta in grid:
        for phi in grid:
            argument = arcsin_argument(theta, phi)
            in_domain = -1e-12 <= argument <= 1.0 + 1e-12
            if in_domain != is_valid_pair(theta, phi):
                mismatches.append((theta, phi, argument))

    assert mismatches == []


def test_extract_exact_gamma() -> None:
    params = extract_fsim(gamma_gate(0.4, 0.1))

    assert params.theta == pytest.approx(0.4, abs=1e-12)
    assert params.phi == pytest.approx(0.1, abs=1e-12)
    assert params.residual < 1e-12
    assert params.fit_fidelity == pytest.approx(1.0, abs=1e-12)


def test_extract_identity() -> None:
    params = extract_fsim(np.eye(4, dtype=complex))

    assert params.theta == pytest.approx(0.0, abs=1e-12)
    assert params.phi == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_extract_inverts_gamma(seed: int) -> None:
    rng = np.random.default_rng(seed)
    theta, phi = rng.uniform(-math.pi, math.pi, size=2)

    params = extract_fsim(gamma_gate(theta, phi))

    assert _angle_distance(params.theta, theta) < 1e-10
    assert _angle_distance(params.phi, phi) < 1e-10
    assert params.residual < 1e-12


def test_extract_recovers_common_z_and_global_phase() -> None:
    matrix = np.exp(0.3j) * common_z(0.2) @ gamma_gate(0.7, -0.4)

    params = extract_fsim(matrix)

    assert params.theta == pytest.approx(0.7, abs=1e-10)
    assert params.phi == pytest.approx(-0.4, abs=1e-10)
    assert params.single_z == pytest.approx(0.2, abs=1e-10)
    assert params.global_phase == pytest.approx(0.3, abs=1e-10)


@pytest.mark.parametrize("phi", [-1.4, -0.3, 0.2, 1.1])
def test_opposite_swap_angles_cancel(phi: float) -> None:
    params = extract_fsim(gamma_gate(0.6, phi) @ gamma_gate(-0.6, phi))

    assert _angle_distance(params.theta, 0.0) < 1e-10
    assert params.phi == pytest.approx(2 * phi, abs=1e-10)


def test_extraction_rejects_leaky_blocks() -> None:
    with pytest.raises(FsimExtractionError) as excinfo:
        extract_fsim(0.5 * np.eye(4, dtype=complex))
    assert excinfo.value.details["leakage"] == pytest.approx(0.75)


def test_cz_class_fit_recovers_common_z() -> None:
    member = np.exp(0.4j) * common_z(0.9) @ CZ

    fit = cz_class_fit(member)

    assert fit.distance < 1e-12
    assert fit.zeta == pytest.approx(0.9, abs=1e-10)
    assert fit.global_phase == pytest.approx(0.4, abs=1e-10)


def test_cnot_is_outside_cz_class() -> None:
    assert distance_to_cz_class(CZ) < 1e-14
    assert distance_to_cz_class(CNOT) > 0.1
