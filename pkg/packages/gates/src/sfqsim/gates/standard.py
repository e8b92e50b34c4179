"""Named logical gates in the |00>, |01>, |10>, |11> ordering (qubit 1 first)."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from sfqsim.shared.errors import ContractViolationError

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


def rx(angle: float) -> np.ndarray:
    """exp(-i angle X / 2)."""
    return math.cos(angle / 2) * IDENTITY - 1j * math.sin(angle / 2) * PAULI_X


def rz(angle: float) -> np.ndarray:
    """diag(exp(-i angle/2), exp(+i angle/2))."""
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def on_qubit(gate: np.ndarray, qubit: int) -> np.ndarray:
    if qubit == 1:
        return np.kron(gate, IDENTITY)
    if qubit == 2:
        return np.kron(IDENTITY, gate)
    raise ContractViolationError(f"qubit must be 1 or 2, got {qubit}")


CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
ISWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
)
SQRT_ISWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, 1 / math.sqrt(2), 1j / math.sqrt(2), 0],
        [0, 1j / math.sqrt(2), 1 / math.sqrt(2), 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

STANDARD_GATES: dict[str, Callable[[], np.ndarray]] = {
    "identity": lambda: np.eye(4, dtype=complex),
    "cz": lambda: CZ.copy(),
    "cnot": lambda: CNOT.copy(),
    "iswap": lambda: ISWAP.copy(),
    "sqrt_iswap": lambda: SQRT_ISWAP.copy(),
    "x90_q1": lambda: on_qubit(rx(math.pi / 2), 1),
    "x90_q2": lambda: on_qubit(rx(math.pi / 2), 2),
    "x180_q1": lambda: on_qubit(rx(math.pi), 1),
    "x180_q2": lambda: on_qubit(rx(math.pi), 2),
}


def resolve_target(gate_id: str) -> np.ndarray:
    """4x4 matrix of a named gate; names are case-insensitive."""
    key = gate_id.strip().lower().replace("-", "_")
    try:
        return STANDARD_GATES[key]()
    except KeyError:
        known = ", ".join(sorted(STANDARD_GATES))
        raise ContractViolationError(f"unknown target gate {gate_id!r} (known: {known})") from None
