import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "shared/python/src"))
sys.path.insert(0, str(ROOT / "device/src"))

from sfqsim.device.model import DeviceModel, build_device  # noqa: E402
from sfqsim.shared.schemas import CircuitParams  # noqa: E402


@pytest.fixture(scope="session")
def reference_device() -> DeviceModel:
    return build_device(CircuitParams())
