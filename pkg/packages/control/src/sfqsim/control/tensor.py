"""Single-mode operators acting on blocks of joint-space column vectors."""

from __future__ import annotations

import numpy as np

_SUBSCRIPTS = ("ai,ijkm->ajkm", "bj,ijkm->ibkm", "ck,ijkm->ijcm")


def apply_local(
    operator: np.ndarray, states: np.ndarray, position: int, levels: int
) -> np.ndarray:
    """Apply ``operator`` on tensor factor ``position`` to every column of ``states``."""
    columns = states.shape[1]
    tensor = states.reshape(levels, levels, levels, columns)
    result = np.einsum(_SUBSCRIPTS[position], operator, tensor)
    return result.reshape(levels**3, columns)


def apply_product(
    operators: tuple[np.ndarray, np.ndarray, np.ndarray], states: np.ndarray, levels: int
) -> np.ndarray:
    """Apply o1 (x) oc (x) o2."""
    for position, operator in enumerate(operators):
        states = apply_local(operator, states, position, levels)
    return states


def unitary_exponential(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, time: float
) -> np.ndarray:
    """exp(-i H t) from the eigendecomposition of H."""
    return (eigenvectors * np.exp(-1j * eigenvalues * time)) @ eigenvectors.conj().T


def exponential_derivative(
    eigenvalues: np.ndarray,
    eigenvectors: np.ndarray,
    direction: np.ndarray,
    time: float,
) -> np.ndarray:
    """Frechet derivative of exp(-i H t) along ``direction`` (Daleckii-Krein)."""
    phases = np.exp(-1j * eigenvalues * time)
    gaps = eigenvalues[:, None] - eigenvalues[None, :]
    close = np.abs(gaps) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = np.where(
            close,
            -1j * time * phases[:, None] * np.ones_like(gaps),
            (phases[:, None] - phases[None, :]) / np.where(close, 1.0, gaps),
        )
    rotated = eigenvectors.conj().T @ direction @ eigenvectors
    return eigenvectors @ (kernel * rotated) @ eigenvectors.conj().T


def trace_inner(left: np.ndarray, right: np.ndarray) -> complex:
    """Tr(left^dagger right)."""
    return complex(np.vdot(left, right))
