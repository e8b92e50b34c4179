import math

import numpy as np
import pytest
from sfqsim.gates.standard import (
    CNOT,
    CZ,
    HADAMARD,
    PAULI_X,
    STANDARD_GATES,
    on_qubit,
    resolve_target,
    rx,
    rz,
)
from sfqsim.shared.errors import ContractViolationError


@pytest.mark.parametrize("name", sorted(STANDARD_GATES))
def test_standard_gates_are_unitary(name: str) -> None:
    gate = resolve_target(name)

    np.testing.assert_allclose(gate.conj().T @ gate, np.eye(4), atol=1e-12)


def test_resolve_target_normalizes_names() -> None:
    np.testing.assert_array_equal(resolve_target(" CZ "), CZ)
    np.testing.assert_array_equal(resolve_target("x90-q1"), resolve_target("x90_q1"))


def test_resolved_targets_are_independent_copies() -> None:
    gate = resolve_target("cz")
    gate[0, 0] = 5.0

    assert resolve_target("cz")[0, 0] == 1.0


def test_unknown_target_lists_known_names() -> None:
    with pytest.raises(ContractViolationError, match="known: .*cnot"):
        resolve_target("toffoli")


def test_rotation_conventions() -> None:
    np.testing.assert_allclose(rx(math.pi), -1j * PAULI_X, atol=1e-15)
    np.testing.assert_allclose(
        rz(math.pi / 2), np.diag(np.exp([-0.25j * math.pi, 0.25j * math.pi]))
    )


def test_cnot_is_cz_conjugated_by_hadamard_on_target() -> None:
    h2 = on_qubit(HADAMARD, 2)

    np.testing.assert_allclose(h2 @ CZ @ h2, CNOT, atol=1e-15)


def test_on_qubit_orders_qubit_one_first() -> None:
    x1 = on_qubit(PAULI_X, 1)

    # |00> -> |10>, index 2 in the (q1, q2) ordering.
    assert x1[2, 0] == 1.0
    with pytest.raises(ContractViolationError):
        on_qubit(PAULI_X, 3)
