import math

import pytest
from pydantic import ValidationError
from sfqsim.shared.errors import ConfigParseError, SfqSimError, SnapError
from sfqsim.shared.results import FsimParams, wrap_angle
from sfqsim.shared.schemas import (
    CircuitParams,
    PenaltyConfig,
    ScheduleTemplate,
    SearchSpace,
)


def test_circuit_params_defaults_match_device_values() -> None:
    params = CircuitParams()

    assert params.C1 == 70.0
    assert params.Cc == 60.0
    assert params.JR == (21.0, 36.0, 21.0)
    assert params.phi_off == (0.130, 0.352, 0.130)
    assert params.C1e == 0.0


def test_circuit_params_rejects_bad_values() -> None:
    with pytest.raises(ValidationError, match="critical currents"):
        CircuitParams(JL=(7.0, 0.0, 7.0))
    with pytest.raises(ValidationError, match="Phi0"):
        CircuitParams(phi_off=(0.1, 1.0, 0.1))
    with pytest.raises(ValidationError):
        CircuitParams(C1=-1.0)
    with pytest.raises(ValidationError):
        CircuitParams(C3=1.0)  # type: ignore[call-arg]


def test_circuit_params_helpers() -> None:
    params = CircuitParams().with_fluxes(phi_off=(0.1, 0.3, 0.1))
    decoupled = params.decoupled()

    assert params.phi_off == (0.1, 0.3, 0.1)
    assert (decoupled.C12, decoupled.C1c, decoupled.C2c) == (0.0, 0.0, 0.0)
    assert decoupled.phi_off == (0.1, 0.3, 0.1)


def test_schedule_template_tick_count() -> None:
    template = ScheduleTemplate(clock_freq=40.0, duration=80.0, excursions=0)

    assert template.n_ticks == 3200
    assert template.period == pytest.approx(0.025)

    with pytest.raises(ValidationError, match="too short"):
        ScheduleTemplate(duration=5.0, n_ramp=64, excursions=1)


def test_penalty_schedule_is_geometric() -> None:
    penalty = PenaltyConfig()

    gamma, mu = penalty.at_stage(10)

    assert gamma == pytest.approx(1e-5 * 1.1**10)
    assert mu == pytest.approx(1.0 / 1.1**10)
    staged = penalty.for_stage(10)
    assert (staged.gamma, staged.mu) == (gamma, mu)
    assert staged.stages == penalty.stages


def test_search_space_requires_choices() -> None:
    with pytest.raises(ValidationError, match="ramp_steps"):
        SearchSpace(ramp_steps=[])


def test_fsim_params_wrap_angles() -> None:
    params = FsimParams(theta=3 * math.pi / 2, phi=-math.pi)

    assert params.theta == pytest.approx(-math.pi / 2)
    assert params.phi == pytest.approx(math.pi)
    assert wrap_angle(math.pi) == pytest.approx(math.pi)


def test_error_records_are_machine_readable() -> None:
    err = SnapError("ordering violated", indices=[1, 2])
    record = err.to_record()

    assert isinstance(err, SfqSimError)
    assert isinstance(err, ValueError)
    assert record == {
        "error": "snap-error",
        "message": "ordering violated",
        "details": {"indices": [1, 2]},
    }
    assert ConfigParseError("bad", key="basis.levels", line=3).to_record()[
        "details"
    ] == {"key": "basis.levels", "line": 3}
