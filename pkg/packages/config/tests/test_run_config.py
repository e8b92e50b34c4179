import logging
import math

import pytest
from sfqsim.config.run_config import RunConfig, evaluate_angle, parse_config
from sfqsim.shared.errors import ConfigParseError


def test_empty_config_uses_device_defaults() -> None:
    config = parse_config("")

    assert config == RunConfig()
    assert config.circuit.C1 == 70.0
    assert config.target_freq == pytest.approx(2 * math.pi * 5.0)
    assert config.basis.n_max == 50
    assert config.basis.levels == 5
    assert config.optimizer.penalty.stages == 150


def test_pi_expressions_are_accepted() -> None:
    config = parse_config(
        """
target = "cnot"

[schedule]
clock_freq = 40
kick_angle = pi/200
duration = 80
excursions = 2
n_ramp = 32

[search]
clock_kick_pairs = [[20, pi/100], [40, 2*pi/400]]
"""
    )

    assert config.target == "cnot"
    assert config.schedule.clock_freq == 40.0
    assert config.schedule.kick_angle == pytest.approx(math.pi / 200)
    assert config.search.clock_kick_pairs[1] == pytest.approx((40.0, math.pi / 200))


def test_levels_zero_names_key_and_line() -> None:
    with pytest.raises(ConfigParseError, match="basis.levels") as exc_info:
        parse_config("[basis]\nn_max = 50\nlevels = 0\n")

    assert exc_info.value.key == "basis.levels"
    assert exc_info.value.line == 3


def test_unknown_key_is_rejected() -> None:
    with pytest.raises(ConfigParseError, match="circuit.C3") as exc_info:
        parse_config("[circuit]\nC3 = 1.0\n")

    assert exc_info.value.line == 2


def test_nested_penalty_section() -> None:
    config = parse_config("[optimizer.penalty]\ngamma = 1e-4\nstages = 3\n")

    assert config.optimizer.penalty.gamma == 1e-4
    assert config.optimizer.penalty.stages == 3
    assert config.optimizer.penalty.mu == 1.0


def test_type_mismatch_and_bad_toml() -> None:
    with pytest.raises(ConfigParseError, match="schedule.n_ramp"):
        parse_config('[schedule]\nn_ramp = "many"\n')
    with pytest.raises(ConfigParseError, match="invalid TOML"):
        parse_config("[schedule\n")


def test_unusual_pairing_is_logged(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING):
        parse_config("[schedule]\nclock_freq = 40\nkick_angle = pi/100\n")

    assert "unusual" in caplog.text


def test_evaluate_angle_is_restricted() -> None:
    assert evaluate_angle("2*pi/4") == pytest.approx(math.pi / 2)
    assert evaluate_angle("-(pi)") == pytest.approx(-math.pi)
    with pytest.raises(ValueError, match="unsupported"):
        evaluate_angle("__import__('os')")
