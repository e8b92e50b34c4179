import numpy as np
import pytest
from sfqsim.device.frame import bare_index, build_logical_frame, lowdin_orthogonalize
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import FrameConstructionError, LevelIdentificationError


def _squared_distance(vectors: np.ndarray, targets: np.ndarray) -> float:
    return float(np.sum(np.abs(vectors - targets) ** 2))


def _gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(vectors)
    return q * np.sign(np.diag(r))


def test_lowdin_leaves_orthonormal_pair_unchanged() -> None:
    pair = np.eye(4)[:, :2]

    np.testing.assert_allclose(lowdin_orthogonalize(pair), pair, atol=1e-15)


def test_lowdin_matches_explicit_inverse_root() -> None:
    e1, e2 = np.eye(3)[:, 0], np.eye(3)[:, 1]
    pair = np.column_stack([e1, (e1 + e2) / np.sqrt(2)])
    overlap = pair.T @ pair
    values, vectors = np.linalg.eigh(overlap)
    inverse_root = vectors @ np.diag(values**-0.5) @ vectors.T

    result = lowdin_orthogonalize(pair)

    np.testing.assert_allclose(result, pair @ inverse_root, atol=1e-14)
    np.testing.assert_allclose(result.T @ result, np.eye(2), atol=1e-14)
    lowdin_distance = _squared_distance(result, pair)
    assert lowdin_distance < _squared_distance(_gram_schmidt(pair), pair)
    assert lowdin_distance < _squared_distance(_gram_schmidt(pair[:, ::-1])[:, ::-1], pair)


def test_lowdin_commutes_with_input_exchange() -> None:
    rng = np.random.default_rng(7)
    pair = rng.normal(size=(6, 2)) + 1j * rng.normal(size=(6, 2))

    np.testing.assert_allclose(
        lowdin_orthogonalize(pair[:, ::-1]), lowdin_orthogonalize(pair)[:, ::-1], atol=1e-13
    )


def test_lowdin_rejects_parallel_vectors() -> None:
    v = np.array([1.0, 2.0, 0.0])

    with pytest.raises(FrameConstructionError, match="singular"):
        lowdin_orthogonalize(np.column_stack([v, v]))


def test_reference_frame_is_orthonormal_with_sign_conventions(
    reference_device: DeviceModel,
) -> None:
    frame = reference_device.frame
    levels = frame.levels
    p = frame.projector

    np.testing.assert_allclose(p @ p.conj().T, np.eye(4), atol=1e-12)
    for column, (q1, q2) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        overlap = frame.states[bare_index(levels, q1, 0, q2), column]
        assert overlap.real > 0
        assert abs(overlap.imag) < 1e-12
    assert abs(frame.states[0, 0]) ** 2 > 0.99
    assert frame.double_excitation_index == 6


def test_frame_diagonalizes_idle_hamiltonian_outside_pair(
    reference_device: DeviceModel,
) -> None:
    frame = reference_device.frame
    reduced = frame.projector @ reference_device.h_idle @ frame.states
    off_diagonal = reduced - np.diag(np.diag(reduced))
    energies = np.linalg.eigvalsh(reference_device.h_idle)

    assert abs(off_diagonal[1, 2]) <= energies[2] - energies[1] + 1e-12
    off_diagonal[1, 2] = off_diagonal[2, 1] = 0.0
    assert np.abs(off_diagonal).max() < 1e-9
    np.testing.assert_allclose(np.diag(reduced).real, frame.energies, atol=1e-10)


def test_frame_rotation_is_diagonal_phase() -> None:
    h = np.diag(np.arange(27, dtype=float) * 10.0)
    h[bare_index(3, 0, 0, 1), bare_index(3, 0, 0, 1)] = 1.0
    h[bare_index(3, 1, 0, 0), bare_index(3, 1, 0, 0)] = 1.0 + 1e-6
    h[bare_index(3, 0, 1, 0), bare_index(3, 0, 1, 0)] = 1.5
    h[bare_index(3, 2, 0, 0), bare_index(3, 2, 0, 0)] = 1.7
    h[bare_index(3, 0, 0, 2), bare_index(3, 0, 0, 2)] = 1.8
    h[bare_index(3, 1, 0, 1), bare_index(3, 1, 0, 1)] = 2.0

    frame = build_logical_frame(h, 3)

    np.testing.assert_allclose(frame.energies, [0.0, 1.0, 1.0 + 1e-6, 2.0])
    assert frame.double_excitation_index == 6
    np.testing.assert_allclose(
        frame.rotation(0.5), np.diag(np.exp(0.5j * frame.energies)), atol=0
    )


def test_missing_double_excitation_is_reported() -> None:
    h = np.diag(np.arange(27, dtype=float) * 10.0)
    h[bare_index(3, 0, 0, 1), bare_index(3, 0, 0, 1)] = 1.0
    h[bare_index(3, 1, 0, 0), bare_index(3, 1, 0, 0)] = 1.0 + 1e-6
    h[bare_index(3, 1, 0, 1), bare_index(3, 1, 0, 1)] = 1e4

    with pytest.raises(LevelIdentificationError, match="101"):
        build_logical_frame(h, 3)
