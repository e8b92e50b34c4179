"""Logical computational frame of the idle device."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from sfqsim.shared.errors import (
    ContractViolationError,
    FrameConstructionError,
    LevelIdentificationError,
)

logger = logging.getLogger(__name__)

# Logical order is |00>, |01>, |10>, |11> with qubit 1 as the left factor.
LOGICAL_LABELS = ("00", "01", "10", "11")
DEFAULT_DEGENERACY_THRESHOLD = 2.0 * math.pi * 1e-3
MAX_CONDITION_NUMBER = 1e8
MIN_DOUBLE_EXCITATION_OVERLAP = 0.5
# Eigen indices searched for the doubly excited logical state.
DOUBLE_EXCITATION_SEARCH = range(5, 9)


def bare_index(levels: int, q1: int, c: int, q2: int) -> int:
    """Joint index of the bare product state |q1, c, q2>."""
    return (q1 * levels + c) * levels + q2


@dataclass(frozen=True)
class LogicalFrame:
    """Four logical states (columns of ``states``) and their idle energies."""

    states: np.ndarray
    energies: np.ndarray
    levels: int
    degenerate_pair: bool = True
    double_excitation_index: int = 6

    @property
    def projector(self) -> np.ndarray:
        """P with rows <L_j|, shape (4, levels**3)."""
        return self.states.conj().T

    def rotation(self, duration: float) -> np.ndarray:
        """Dressed-frame correction R = diag(exp(+i E_j t))."""
        return np.diag(np.exp(1j * self.energies * duration))

    def project(self, unitary: np.ndarray) -> np.ndarray:
        return self.projector @ unitary @ self.states


def _positive_overlap(vector: np.ndarray, index: int) -> np.ndarray:
    value = vector[index]
    if abs(value) == 0.0:
        return vector
    return vector * (abs(value) / value)


def lowdin_orthogonalize(vectors: np.ndarray) -> np.ndarray:
    """Symmetric orthogonalization V S^{-1/2} of the columns of ``vectors``."""
    overlap = vectors.conj().T @ vectors
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (overlap + overlap.conj().T))
    if eigenvalues.min() <= 0.0 or eigenvalues.max() / eigenvalues.min() > MAX_CONDITION_NUMBER:
        raise FrameConstructionError(
            "overlap matrix of the projected bare states is singular",
            condition=float(eigenvalues.max() / max(eigenvalues.min(), 1e-300)),
        )
    inverse_root = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.conj().T
    return vectors @ inverse_root


def build_logical_frame(
    h_idle: np.ndarray,
    levels: int,
    *,
    degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD,
) -> LogicalFrame:
    """Identify |00>, |01>, |10>, |11> among the idle eigenstates.

    The near-degenerate single-excitation pair is fixed by projecting the
    bare states onto its span and applying symmetric orthogonalization.
    """
    dim = levels**3
    if h_idle.shape != (dim, dim):
        raise ContractViolationError(f"idle Hamiltonian must be {dim}x{dim}")
    energies, vectors = np.linalg.eigh(h_idle)

    i000 = bare_index(levels, 0, 0, 0)
    i001 = bare_index(levels, 0, 0, 1)
    i100 = bare_index(levels, 1, 0, 0)
    i101 = bare_index(levels, 1, 0, 1)

    ground = _positive_overlap(vectors[:, 0], i000)

    pair = vectors[:, 1:3]
    splitting = float(energies[2] - energies[1])
    degenerate = splitting < degeneracy_threshold
    if degenerate:
        bare = np.zeros((dim, 2), dtype=complex)
        bare[i001, 0] = 1.0
        bare[i100, 1] = 1.0
        projected = pair @ (pair.conj().T @ bare)
        single = lowdin_orthogonalize(projected)
        state01 = _positive_overlap(single[:, 0], i001)
        state10 = _positive_overlap(single[:, 1], i100)
    else:
        # Hybridized pair: keep eigenstates, assign each to its dominant bare state.
        weight01 = np.abs(pair[i001, :])
        first = int(np.argmax(weight01))
        state01 = _positive_overlap(pair[:, first], i001)
        state10 = _positive_overlap(pair[:, 1 - first], i100)

    candidates = [i for i in DOUBLE_EXCITATION_SEARCH if i < dim]
    overlaps = [abs(vectors[i101, i]) for i in candidates]
    best = int(np.argmax(overlaps))
    if overlaps[best] < MIN_DOUBLE_EXCITATION_OVERLAP:
        raise LevelIdentificationError(
            "no eigenstate resembles the bare |101> state",
            best_overlap=float(overlaps[best]),
        )
    index11 = candidates[best]
    state11 = _positive_overlap(vectors[:, index11], i101)

    states = np.column_stack([ground, state01, state10, state11])
    logical_energies = np.real(np.einsum("ij,ik,kj->j", states.conj(), h_idle, states))
    logger.debug(
        "logical frame: pair splitting %.3e rad/ns, |11> at eigen index %d",
        splitting,
        index11,
    )
    states.setflags(write=False)
    logical_energies.setflags(write=False)
    return LogicalFrame(
        states=states,
        energies=logical_energies,
        levels=levels,
        degenerate_pair=degenerate,
        double_excitation_index=index11,
    )
