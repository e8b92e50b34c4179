"""Validated parameter sets shared by the device, control and CLI layers."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Triple = tuple[float, float, float]

REFERENCE_PHI_OFF: Triple = (0.130, 0.352, 0.130)
REFERENCE_PHI_ON: Triple = (0.130, 0.376, 0.130)


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class CircuitParams(_Frozen):
    """Lumped-element description of qubit 1, coupler and qubit 2.

    Junction currents and fluxes are ordered (qubit 1, coupler, qubit 2).
    """

    C1: float = Field(default=70.0, ge=0.0, description="Qubit-1 capacitance (fF)")
    C2: float = Field(default=70.0, ge=0.0, description="Qubit-2 capacitance (fF)")
    Cc: float = Field(default=60.0, ge=0.0, description="Coupler capacitance (fF)")
    C12: float = Field(default=0.25, ge=0.0, description="Direct qubit-qubit (fF)")
    C1c: float = Field(default=2.0, ge=0.0, description="Qubit 1 to coupler (fF)")
    C2c: float = Field(default=2.0, ge=0.0, description="Qubit 2 to coupler (fF)")
    C1e: float = Field(default=0.0, ge=0.0, description="Qubit-1 drive line (fF)")
    C2e: float = Field(default=0.0, ge=0.0, description="Qubit-2 drive line (fF)")
    JL: Triple = Field(default=(7.0, 18.0, 7.0), description="Left junctions (nA)")
    JR: Triple = Field(default=(21.0, 36.0, 21.0), description="Right junctions (nA)")
    phi_off: Triple = Field(default=REFERENCE_PHI_OFF, description="Idle fluxes (Phi0)")
    phi_on: Triple = Field(default=REFERENCE_PHI_ON, description="Active fluxes (Phi0)")

    @field_validator("JL", "JR")
    @classmethod
    def currents_positive(cls, value: Triple) -> Triple:
        if any(current <= 0.0 for current in value):
            raise ValueError("critical currents must be > 0 nA")
        return value

    @field_validator("phi_off", "phi_on")
    @classmethod
    def flux_in_period(cls, value: Triple) -> Triple:
        if any(not 0.0 <= flux < 1.0 for flux in value):
            raise ValueError("fluxes must lie in [0, 1) Phi0")
        return value

    def with_fluxes(
        self, phi_off: Triple | None = None, phi_on: Triple | None = None
    ) -> CircuitParams:
        data = self.model_dump()
        if phi_off is not None:
            data["phi_off"] = tuple(float(x) for x in phi_off)
        if phi_on is not None:
            data["phi_on"] = tuple(float(x) for x in phi_on)
        return CircuitParams.model_validate(data)

    def decoupled(self) -> CircuitParams:
        """Same circuit with every coupling capacitance removed."""
        return CircuitParams.model_validate(
            {**self.model_dump(), "C12": 0.0, "C1c": 0.0, "C2c": 0.0}
        )


class BasisSettings(_Frozen):
    n_max: int = Field(default=50, ge=20, description="Charge truncation, states -n..n")
    levels: int = Field(default=5, ge=2, le=12, description="Levels kept per mode")


class CalibrationSettings(_Frozen):
    target_freq_ghz: float = Field(default=5.0, ge=1.0, le=10.0)
    initial_guess: Triple = REFERENCE_PHI_OFF
    tolerance_khz: float = Field(default=10.0, gt=0.0)
    max_iterations: int = Field(default=4000, ge=10)


class ScheduleTemplate(_Frozen):
    """Shape of a control schedule before amplitudes are chosen."""

    clock_freq: float = Field(default=20.0, gt=0.0, description="SFQ clock (GHz)")
    duration: float = Field(default=70.0, ge=0.0, description="Total time (ns)")
    kick_angle: float = Field(default=math.pi / 100, gt=0.0, lt=math.pi)
    n_ramp: int = Field(default=64, ge=1, le=65535)
    excursions: int = Field(default=2, ge=0, le=65535)
    qubit_freq: float = Field(default=5.0, gt=0.0, description="Qubit frequency (GHz)")

    @property
    def period(self) -> float:
        return 1.0 / self.clock_freq

    @property
    def n_ticks(self) -> int:
        # Tolerate representation error in duration * clock_freq.
        return int(math.floor(self.duration * self.clock_freq + 1e-9))

    @model_validator(mode="after")
    def excursions_fit(self) -> ScheduleTemplate:
        if self.excursions and self.n_ticks < self.excursions * 2 * self.n_ramp:
            raise ValueError(
                "duration too short for the requested excursions and ramp steps"
            )
        return self


class PenaltyConfig(_Frozen):
    gamma: float = Field(default=1e-5, ge=0.0, description="Binarization weight")
    mu: float = Field(default=1.0, ge=0.0, description="Log-barrier weight")
    factor: float = Field(default=1.1, gt=1.0)
    updates_per_stage: int = Field(default=20, ge=1)
    stages: int = Field(default=150, ge=1)

    def at_stage(self, stage: int) -> tuple[float, float]:
        """Return (gamma, mu) in effect at the start of ``stage``."""
        return self.gamma * self.factor**stage, self.mu / self.factor**stage

    def for_stage(self, stage: int) -> PenaltyConfig:
        """Copy whose gamma and mu are the weights of ``stage``."""
        gamma, mu = self.at_stage(stage)
        return self.model_copy(update={"gamma": gamma, "mu": mu})


class OptimizerSettings(_Frozen):
    penalty: PenaltyConfig = PenaltyConfig()
    seed: int = 0
    amplitude_bound: float = Field(default=1e-6, gt=0.0, lt=0.5)
    lbfgs_memory: int = Field(default=10, ge=1)
    trotter_substeps: int = Field(default=4, ge=1)
    z_compensate: bool = True
    init_low: float = Field(default=0.4, gt=0.0, lt=1.0)
    init_high: float = Field(default=0.6, gt=0.0, lt=1.0)
    excursion_fill: float = Field(default=0.6, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def init_range_ordered(self) -> OptimizerSettings:
        if self.init_low > self.init_high:
            raise ValueError("init_low must not exceed init_high")
        return self


class SearchSpace(_Frozen):
    """Finite choices sampled by the random hyperparameter search."""

    durations: list[float] = Field(default_factory=lambda: [60.0, 70.0, 80.0])
    clock_kick_pairs: list[tuple[float, float]] = Field(
        default_factory=lambda: [(20.0, math.pi / 100), (40.0, math.pi / 200)]
    )
    ramp_steps: list[int] = Field(default_factory=lambda: [32, 64])
    excursion_counts: list[int] = Field(default_factory=lambda: [1, 2])

    @model_validator(mode="after")
    def non_empty(self) -> SearchSpace:
        for name in ("durations", "clock_kick_pairs", "ramp_steps", "excursion_counts"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        return self


class DecompositionSettings(_Frozen):
    hold_ns: float = Field(default=17.0, gt=0.0)
    ramp_steps: int = Field(default=64, ge=1)
    step_duration: float = Field(default=0.05, gt=0.0)
    layer_duration: float = Field(default=10.0, gt=0.0)
    sweep_start: float = Field(default=5.0, gt=0.0)
    sweep_stop: float = Field(default=30.0, gt=0.0)
    sweep_step: float = Field(default=0.25, gt=0.0)
