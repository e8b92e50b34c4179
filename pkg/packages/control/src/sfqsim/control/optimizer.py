"""Gradient-based synthesis of SFQ schedules through a continuous relaxation.

Binary kicks are relaxed to amplitudes in (0, 1) and excursion corners to
continuous times. The cost adds a binarization penalty and a log barrier to
the infidelity; their weights move geometrically from stage to stage, each
stage being a fresh bounded L-BFGS-B run. Gradients come from one forward
pass that stores the per-tick states and one adjoint pass.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy.optimize import minimize
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import (
    BarrierDomainError,
    ContractViolationError,
    OptimizationAbortedError,
    SnapError,
)
from sfqsim.shared.results import RunStatus, RunSummary
from sfqsim.shared.schemas import OptimizerSettings, PenaltyConfig, ScheduleTemplate

from .backends import PropagatorBackend, TrotterBackend
from .checkpoint import StageCheckpoint
from .fidelity import GateReport, evaluate_schedule, logical_report
from .propagator import KickOperators, evolve, logical_matrix
from .schedule import ControlSchedule, excursion_problems

logger = logging.getLogger(__name__)

SNAP_THRESHOLD = 0.5
# L-BFGS-B stopped in the line search.
_ABNORMAL_STATUS = 2


@dataclass(frozen=True)
class ParameterLayout:
    """theta = (amplitudes of qubit 1, amplitudes of qubit 2, corners)."""

    n_ticks: int
    n_excursions: int

    @property
    def size(self) -> int:
        return 2 * self.n_ticks + 2 * self.n_excursions

    @property
    def amplitudes(self) -> slice:
        return slice(0, 2 * self.n_ticks)

    @property
    def corners(self) -> slice:
        return slice(2 * self.n_ticks, self.size)

    def split(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if values.shape != (self.size,):
            raise ContractViolationError(
                f"parameter vector has shape {values.shape}, layout needs ({self.size},)"
            )
        n = self.n_ticks
        return values[:n], values[n : 2 * n], values[self.corners]

    def bounds(self, duration: float, epsilon: float) -> list[tuple[float, float]]:
        return [(epsilon, 1.0 - epsilon)] * (2 * self.n_ticks) + [
            (0.0, duration)
        ] * (2 * self.n_excursions)


@dataclass(frozen=True, eq=False)
class RelaxedParams:
    values: np.ndarray
    template: ScheduleTemplate
    flux_off: float
    flux_on: float

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        self.layout.split(values)

    @property
    def layout(self) -> ParameterLayout:
        return ParameterLayout(self.template.n_ticks, self.template.excursions)

    def schedule(self) -> ControlSchedule:
        a1, a2, corners = self.layout.split(self.values)
        template = self.template
        return ControlSchedule(
            clock_freq=template.clock_freq,
            duration=template.duration,
            kick_angle=template.kick_angle,
            amplitudes_q1=a1,
            amplitudes_q2=a2,
            excursions=tuple(map(tuple, corners.reshape(-1, 2))),  # type: ignore[arg-type]
            n_ramp=template.n_ramp,
            flux_off=self.flux_off,
            flux_on=self.flux_on,
            mode="relaxed",
        )

    def with_values(self, values: np.ndarray) -> RelaxedParams:
        return replace(self, values=values)

    @classmethod
    def from_schedule(cls, schedule: ControlSchedule) -> RelaxedParams:
        template = ScheduleTemplate(
            clock_freq=schedule.clock_freq,
            duration=schedule.duration,
            kick_angle=schedule.kick_angle,
            n_ramp=schedule.n_ramp,
            excursions=len(schedule.excursions),
        )
        corners = np.array(schedule.excursions, dtype=float).reshape(-1)
        values = np.concatenate([schedule.amplitudes_q1, schedule.amplitudes_q2, corners])
        return cls(values, template, schedule.flux_off, schedule.flux_on)

    @classmethod
    def initial(
        cls,
        template: ScheduleTemplate,
        flux_off: float,
        flux_on: float,
        settings: OptimizerSettings,
    ) -> RelaxedParams:
        """Uniform random amplitudes and excursions centred in equal slots."""
        rng = np.random.default_rng(settings.seed)
        amplitudes = rng.uniform(settings.init_low, settings.init_high, 2 * template.n_ticks)
        slot = template.duration / max(template.excursions, 1)
        minimum = 2 * template.n_ramp * template.period
        width = min(slot, max(settings.excursion_fill * slot, minimum))
        corners = []
        for index in range(template.excursions):
            centre = (index + 0.5) * slot
            corners.extend((centre - width / 2, centre + width / 2))
        values = np.concatenate([amplitudes, np.array(corners, dtype=float)])
        return cls(values, template, flux_off, flux_on)


@dataclass(frozen=True)
class OptimizationContext:
    """Immutable data shared by every cost evaluation of one run."""

    device: DeviceModel
    target: np.ndarray
    template: ScheduleTemplate
    backend: PropagatorBackend
    kicks: KickOperators
    z_compensate: bool = True

    @classmethod
    def build(
        cls,
        device: DeviceModel,
        target: np.ndarray,
        template: ScheduleTemplate,
        *,
        substeps: int = 4,
        z_compensate: bool = True,
    ) -> OptimizationContext:
        backend = TrotterBackend(
            device,
            template.period,
            substeps=substeps,
            fused_levels=(device.coupler_off, device.coupler_on),
        )
        return cls(
            device=device,
            target=np.asarray(target, dtype=complex),
            template=template,
            backend=backend,
            kicks=KickOperators(device.basis, template.kick_angle),
            z_compensate=z_compensate,
        )

    @property
    def layout(self) -> ParameterLayout:
        return ParameterLayout(self.template.n_ticks, self.template.excursions)

    def params(self, values: np.ndarray) -> RelaxedParams:
        return RelaxedParams(
            values, self.template, self.device.coupler_off, self.device.coupler_on
        )


@dataclass(frozen=True)
class CostBreakdown:
    value: float
    infidelity: float
    penalty: float
    barrier: float
    report: GateReport


def _penalty_terms(
    amplitudes: np.ndarray, corners: np.ndarray, period: float, penalty: PenaltyConfig
) -> tuple[float, float, np.ndarray, np.ndarray]:
    gamma, mu = penalty.gamma, penalty.mu
    if mu > 0.0:
        outside = np.flatnonzero((amplitudes <= 0.0) | (amplitudes >= 1.0))
        if outside.size:
            raise BarrierDomainError(
                "log barrier is undefined for amplitudes at 0 or 1",
                indices=outside[:10].tolist(),
            )
    angle = 2.0 * math.pi * corners / period
    binarization = gamma * (
        float(np.sum(amplitudes * (1.0 - amplitudes))) - float(np.sum(np.cos(angle)))
    )
    amplitude_grad = gamma * (1.0 - 2.0 * amplitudes)
    corner_grad = gamma * (2.0 * math.pi / period) * np.sin(angle)
    barrier = 0.0
    if mu > 0.0:
        barrier = -mu * float(np.sum(np.log(amplitudes) + np.log1p(-amplitudes)))
        amplitude_grad = amplitude_grad - mu * (1.0 / amplitudes - 1.0 / (1.0 - amplitudes))
    return binarization, barrier, amplitude_grad, corner_grad


def _evaluate(
    params: RelaxedParams,
    penalty: PenaltyConfig,
    context: OptimizationContext,
    *,
    with_gradient: bool,
) -> tuple[CostBreakdown, np.ndarray | None]:
    layout = context.layout
    a1, a2, corners = layout.split(params.values)
    binarization, barrier, amplitude_grad, corner_grad = _penalty_terms(
        params.values[layout.amplitudes], corners, context.template.period, penalty
    )

    schedule = params.schedule()
    device = context.device
    frame = device.frame
    forward = evolve(
        schedule, context.backend, context.kicks, frame.states, keep_states=with_gradient
    )
    matrix = logical_matrix(device, schedule, forward.final)
    report = logical_report(
        matrix, context.target, schedule.frame_duration, z_compensate=context.z_compensate
    )
    infidelity = 1.0 - report.fidelity
    breakdown = CostBreakdown(
        value=infidelity + binarization + barrier,
        infidelity=infidelity,
        penalty=binarization,
        barrier=barrier,
        report=report,
    )
    if not with_gradient:
        return breakdown, None

    # Costate dC/dPsi* at the final tick for C = 1 - F.
    compensated = report.compensated_target(context.target)
    overlap = np.trace(compensated.conj().T @ matrix)
    fidelity_slope = (matrix + overlap * compensated) / 20.0
    costates = -frame.states @ (
        frame.rotation(schedule.frame_duration).conj().T @ fidelity_slope
    )

    kicks = context.kicks
    backend = context.backend
    fluxes = forward.fluxes
    slopes = schedule.tick_flux_slopes()
    grad_a1 = np.zeros(layout.n_ticks)
    grad_a2 = np.zeros(layout.n_ticks)
    grad_corners = np.zeros(2 * layout.n_excursions)
    strength1, strength2 = kicks.strength(1), kicks.strength(2)
    for tick in range(layout.n_ticks - 1, -1, -1):
        flux = float(fluxes[tick])
        after_q1 = kicks.apply(forward.states[tick], 1, float(a1[tick]))
        after_q2 = kicks.apply(after_q1, 2, float(a2[tick]))
        if slopes.shape[1] and np.any(slopes[tick]):
            grad_corners += backend.flux_gradient(after_q2, costates, flux) * slopes[tick]
        costates = backend.apply_adjoint(costates, flux)
        grad_a2[tick] = 2.0 * strength2 * np.vdot(costates, kicks.apply_charge(after_q2, 2)).imag
        costates = kicks.apply(costates, 2, float(a2[tick]), adjoint=True)
        grad_a1[tick] = 2.0 * strength1 * np.vdot(costates, kicks.apply_charge(after_q1, 1)).imag
        costates = kicks.apply(costates, 1, float(a1[tick]), adjoint=True)

    gradient = np.concatenate([grad_a1, grad_a2, grad_corners])
    gradient[layout.amplitudes] += amplitude_grad
    gradient[layout.corners] += corner_grad
    return breakdown, gradient


def cost(params: RelaxedParams, penalty: PenaltyConfig, context: OptimizationContext) -> float:
    """1 - F + P + Phi at the weights carried by ``penalty``."""
    return _evaluate(params, penalty, context, with_gradient=False)[0].value


def gradient(
    params: RelaxedParams, penalty: PenaltyConfig, context: OptimizationContext
) -> np.ndarray:
    return cost_and_gradient(params, penalty, context)[1]


def cost_and_gradient(
    params: RelaxedParams, penalty: PenaltyConfig, context: OptimizationContext
) -> tuple[float, np.ndarray]:
    breakdown, grad = _evaluate(params, penalty, context, with_gradient=True)
    return breakdown.value, grad  # type: ignore[return-value]


def round_and_snap(params: RelaxedParams) -> ControlSchedule:
    """Threshold amplitudes at 0.5 and move corners to the nearest clock tick."""
    template = params.template
    layout = params.layout
    a1, a2, corners = layout.split(params.values)
    clock = template.clock_freq
    ticks = [
        (round(start * clock), round(end * clock)) for start, end in corners.reshape(-1, 2)
    ]
    problems = excursion_problems(ticks, template.n_ramp, template.n_ticks)
    bad = [index for index, problem in enumerate(problems) if problem]
    if bad:
        details = "; ".join(f"excursion {i}: {problems[i]}" for i in bad)
        raise SnapError(f"snapped excursions violate discrete constraints ({details})", indices=bad)
    return ControlSchedule(
        clock_freq=clock,
        duration=template.duration,
        kick_angle=template.kick_angle,
        amplitudes_q1=(a1 >= SNAP_THRESHOLD).astype(float),
        amplitudes_q2=(a2 >= SNAP_THRESHOLD).astype(float),
        excursions=tuple((start / clock, end / clock) for start, end in ticks),
        n_ramp=template.n_ramp,
        flux_off=params.flux_off,
        flux_on=params.flux_on,
        mode="discrete",
    )


@dataclass(frozen=True, eq=False)
class OptimizationRun:
    target: str
    target_matrix: np.ndarray
    template: ScheduleTemplate
    settings: OptimizerSettings = field(default_factory=OptimizerSettings)
    status: RunStatus = "pending"
    stages_completed: int = 0
    trajectory: tuple[float, ...] = ()
    params: RelaxedParams | None = None
    schedule: ControlSchedule | None = None
    relaxed_report: GateReport | None = None
    report: GateReport | None = None
    error: dict[str, Any] | None = None

    @property
    def seed(self) -> int:
        return self.settings.seed

    @property
    def discrete_infidelity(self) -> float:
        return self.report.infidelity if self.report is not None else math.inf

    def summary(self) -> RunSummary:
        return RunSummary(
            target=self.target,
            seed=self.seed,
            clock_freq=self.template.clock_freq,
            duration=self.template.duration,
            kick_angle=self.template.kick_angle,
            n_ramp=self.template.n_ramp,
            excursions=self.template.excursions,
            status=self.status,
            relaxed_fidelity=None if self.relaxed_report is None else self.relaxed_report.fidelity,
            discrete_fidelity=None if self.report is None else self.report.fidelity,
            trajectory=list(self.trajectory),
            error=self.error,
        )


def optimize(
    run: OptimizationRun,
    device: DeviceModel,
    *,
    resume_from: StageCheckpoint | None = None,
    on_stage: Callable[[StageCheckpoint], None] | None = None,
    context: OptimizationContext | None = None,
) -> OptimizationRun:
    """Run every penalty stage, then snap and score the discrete schedule."""
    settings = run.settings
    penalty = settings.penalty
    if context is None:
        context = OptimizationContext.build(
            device,
            run.target_matrix,
            run.template,
            substeps=settings.trotter_substeps,
            z_compensate=settings.z_compensate,
        )
    layout = context.layout

    if resume_from is not None:
        resume_from.check_compatible(run.target, run.template, settings)
        values = np.array(resume_from.theta, dtype=float)
        trajectory = list(resume_from.trajectory)
        first_stage = resume_from.stage
        logger.info("resuming %s from stage %d", run.target, first_stage)
    else:
        values = np.array(
            RelaxedParams.initial(
                run.template, device.coupler_off, device.coupler_on, settings
            ).values
        )
        trajectory = []
        first_stage = 0
    bounds = layout.bounds(run.template.duration, settings.amplitude_bound)

    for stage in range(first_stage, penalty.stages):
        weights = penalty.for_stage(stage)

        def objective(
            x: np.ndarray, weights: PenaltyConfig = weights, stage: int = stage
        ) -> tuple[float, np.ndarray]:
            value, grad = cost_and_gradient(context.params(x), weights, context)
            if not (math.isfinite(value) and np.all(np.isfinite(grad))):
                raise OptimizationAbortedError(
                    "non-finite cost or gradient",
                    stage=stage,
                    cost=value,
                    gamma=weights.gamma,
                    mu=weights.mu,
                )
            return value, grad

        def record(intermediate_result: Any) -> None:
            trajectory.append(float(intermediate_result.fun))

        result = minimize(
            objective,
            values,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            callback=record,
            options={"maxiter": penalty.updates_per_stage, "maxcor": settings.lbfgs_memory},
        )
        if result.status == _ABNORMAL_STATUS:
            logger.warning("stage %d: line search failed (%s)", stage, result.message)
        values = np.asarray(result.x, dtype=float)
        logger.info(
            "stage %d/%d: cost %.6e (gamma %.3e, mu %.3e)",
            stage + 1,
            penalty.stages,
            float(result.fun),
            weights.gamma,
            weights.mu,
        )
        if on_stage is not None:
            on_stage(
                StageCheckpoint(
                    target=run.target,
                    template=run.template,
                    settings=settings,
                    stage=stage + 1,
                    gamma=weights.gamma,
                    mu=weights.mu,
                    theta=values.tolist(),
                    trajectory=list(trajectory),
                )
            )

    params = context.params(values)
    relaxed_report = evaluate_schedule(
        params.schedule(),
        device,
        run.target_matrix,
        context.backend,
        z_compensate=settings.z_compensate,
    )
    schedule = round_and_snap(params).quantized()
    report = evaluate_schedule(
        schedule, device, run.target_matrix, "exact-segment", z_compensate=settings.z_compensate
    )
    logger.info(
        "%s: relaxed fidelity %.6f, discrete fidelity %.6f",
        run.target,
        relaxed_report.fidelity,
        report.fidelity,
    )
    return replace(
        run,
        status="completed",
        stages_completed=penalty.stages,
        trajectory=tuple(trajectory),
        params=params,
        schedule=schedule,
        relaxed_report=relaxed_report,
        report=report,
    )


def binarized_fraction(params: RelaxedParams, tolerance: float = 0.05) -> float:
    """Share of amplitudes within ``tolerance`` of 0 or 1."""
    amplitudes = params.values[params.layout.amplitudes]
    if amplitudes.size == 0:
        return 1.0
    near = np.minimum(amplitudes, 1.0 - amplitudes) <= tolerance
    return float(np.mean(near))


def relaxed_cost_report(params: RelaxedParams, context: OptimizationContext) -> CostBreakdown:
    """Cost terms at gamma = mu = 0 (the bare infidelity and its report)."""
    bare = PenaltyConfig(gamma=0.0, mu=0.0)
    return _evaluate(params, bare, context, with_gradient=False)[0]
