"""Result records persisted as JSON or CSV."""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, Field, field_validator

RunStatus = Literal["pending", "completed", "failed"]


def wrap_angle(value: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.remainder(value, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


class CalibrationResult(BaseModel):
    phi_off: tuple[float, float, float]
    phi_on: tuple[float, float, float]
    qubit_freqs: tuple[float, float] = Field(description="Dressed 01/10 energies (rad/ns)")
    splitting: float = Field(description="Residual 01/10 splitting (rad/ns)")
    zz_idle: float = Field(description="Residual ZZ rate at the idle point (rad/ns)")
    objective: float = 0.0
    evaluations: int = 0


class FsimParams(BaseModel):
    theta: float
    phi: float
    single_z: float = 0.0
    global_phase: float = 0.0
    fit_fidelity: float = 1.0
    residual: float = 0.0

    @field_validator("theta", "phi")
    @classmethod
    def wrapped(cls, value: float) -> float:
        return wrap_angle(value)


class DecompositionAngles(BaseModel):
    xi: float
    eta: float
    alpha: float

    @field_validator("xi", "eta", "alpha")
    @classmethod
    def finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("decomposition angles must be finite")
        return value


class GateReportSummary(BaseModel):
    target: str | None = None
    fidelity: float
    raw_fidelity: float
    phi_z1: float = 0.0
    phi_z2: float = 0.0
    leakage: float
    duration: float
    wall_time_s: float = 0.0
    matrix: list[list[tuple[float, float]]] = Field(
        default_factory=list, description="Logical matrix as (re, im) pairs"
    )


class SweepRow(BaseModel):
    """One hold time of the fSim calibration sweep."""

    hold_ns: float
    duration_ns: float
    infidelity: float = Field(description="1 - fidelity to the best-fit fSim gate")
    theta: float
    phi: float
    leakage: float = 0.0
    status: RunStatus = "completed"


class GridRow(BaseModel):
    """Discrete fidelity of one single-qubit gate synthesis."""

    clock_freq: float
    kick_angle: float
    duration: float
    fidelity: float | None = None
    leakage: float | None = None
    status: RunStatus = "completed"


class RunSummary(BaseModel):
    target: str
    seed: int
    clock_freq: float
    duration: float
    kick_angle: float
    n_ramp: int
    excursions: int
    status: RunStatus = "completed"
    relaxed_fidelity: float | None = None
    discrete_fidelity: float | None = None
    trajectory: list[float] = Field(default_factory=list)
    error: dict[str, object] | None = None
