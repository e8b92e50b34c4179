import sys
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "shared/python/src"))
sys.path.insert(0, str(ROOT / "device/src"))
sys.path.insert(0, str(ROOT / "control/src"))

from sfqsim.device.model import DeviceModel, build_device  # noqa: E402
from sfqsim.shared.schemas import CircuitParams  # noqa: E402

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


@pytest.fixture(scope="session")
def reference_device() -> DeviceModel:
    return build_device(CircuitParams())


@pytest.fixture
def rx_q1() -> Callable[[float], np.ndarray]:
    def build(angle: float) -> np.ndarray:
        rx = np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * PAULI_X
        return np.kron(rx, np.eye(2))

    return build
