"""CZ and CNOT built from two native fSim excursions and three single-qubit layers."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from sfqsim.control.fidelity import GateReport, evaluate_schedule
from sfqsim.control.optimizer import OptimizationRun, optimize
from sfqsim.control.schedule import ControlSchedule
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import CompositeDependencyError, ContractViolationError
from sfqsim.shared.results import FsimParams
from sfqsim.shared.schemas import OptimizerSettings, ScheduleTemplate

from .fsim import common_z, cz_class_fit, decomposition_angles, fsim_family
from .standard import HADAMARD, IDENTITY, PAULI_Z, on_qubit, resolve_target, rx
from .sweep import FsimCalibration

logger = logging.getLogger(__name__)

CompositeTarget = Literal["cz", "cnot"]
LAYER_NAMES = ("pre", "mid", "post")


@dataclass(frozen=True)
class CompositeLayers:
    """Single-qubit layers around two identical native fSim gates N.

    The composite is post @ N @ mid @ N @ pre.
    """

    pre: np.ndarray
    mid: np.ndarray
    post: np.ndarray

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        yield from zip(LAYER_NAMES, (self.pre, self.mid, self.post), strict=True)


def composite_layer_targets(target: CompositeTarget, fsim: FsimParams) -> CompositeLayers:
    """Layers that turn the native gate ``fsim`` into exactly CZ or CNOT.

    The second fSim needs the opposite swap angle; Z on qubit 1 around the
    native gate provides it. The common Z of the native gate is undone in the
    layers, and the residual common Z of the CZ class in the last layer.
    """
    if target not in ("cz", "cnot"):
        raise ContractViolationError(f"composite target must be cz or cnot, got {target!r}")
    angles = decomposition_angles(fsim.theta, fsim.phi)
    strip = common_z(-fsim.single_z)
    z1 = on_qubit(PAULI_Z, 1)
    pre = np.kron(rx(angles.xi), rx(angles.eta))
    mid = z1 @ np.kron(rx(-2.0 * angles.alpha), IDENTITY) @ strip
    post = np.kron(rx(angles.xi), rx(-angles.eta)) @ z1 @ strip

    native = fsim_family(fsim.theta, fsim.phi, fsim.single_z)
    fit = cz_class_fit(composite_unitary(CompositeLayers(pre, mid, post), native))
    post = common_z(-fit.zeta) @ post
    if target == "cnot":
        h2 = on_qubit(HADAMARD, 2)
        pre = h2 @ pre
        post = h2 @ post
    return CompositeLayers(pre=pre, mid=mid, post=post)


def composite_unitary(layers: CompositeLayers, native: np.ndarray) -> np.ndarray:
    return layers.post @ native @ layers.mid @ native @ layers.pre


@dataclass(frozen=True)
class LayerLibrary:
    """Optimized single-qubit layer schedules keyed by layer name."""

    runs: dict[str, OptimizationRun] = field(default_factory=dict)

    def schedule(self, name: str) -> ControlSchedule:
        run = self.runs.get(name)
        if run is None or run.status != "completed" or run.schedule is None:
            raise CompositeDependencyError(
                f"single-qubit layer {name!r} has not been synthesized", layer=name
            )
        return run.schedule


def synthesize_layer_library(
    device: DeviceModel,
    layers: CompositeLayers,
    template: ScheduleTemplate,
    settings: OptimizerSettings,
    *,
    on_layer: Callable[[str, OptimizationRun], None] | None = None,
) -> LayerLibrary:
    """Optimize one kick schedule per layer.

    Layers are matched without Z compensation since their phases matter
    once composed.
    """
    template = ScheduleTemplate.model_validate({**template.model_dump(), "excursions": 0})
    settings = settings.model_copy(update={"z_compensate": False})
    runs = {}
    for name, matrix in layers.items():
        run = optimize(
            OptimizationRun(
                target=f"layer-{name}",
                target_matrix=matrix,
                template=template,
                settings=settings,
            ),
            device,
        )
        logger.info("layer %s: discrete fidelity %.6f", name, run.report.fidelity)
        if on_layer is not None:
            on_layer(name, run)
        runs[name] = run
    return LayerLibrary(runs)


def concatenate_schedules(schedules: list[ControlSchedule]) -> ControlSchedule:
    """Back-to-back discrete schedules on one clock."""
    if not schedules:
        raise ContractViolationError("nothing to concatenate")
    first = schedules[0]
    for schedule in schedules:
        if schedule.mode != "discrete":
            raise ContractViolationError("only discrete schedules can be concatenated")
        if schedule.clock_freq != first.clock_freq:
            raise ContractViolationError("schedules use different clock frequencies")
        if (schedule.flux_off, schedule.flux_on) != (first.flux_off, first.flux_on):
            raise ContractViolationError("schedules use different coupler fluxes")
    # Kick-free pieces take the kick angle of the others.
    angles = {
        s.kick_angle for s in schedules if s.amplitudes_q1.any() or s.amplitudes_q2.any()
    }
    if len(angles) > 1:
        raise ContractViolationError(f"schedules use different kick angles {sorted(angles)}")
    ramps = {schedule.n_ramp for schedule in schedules if schedule.excursions}
    if len(ramps) > 1:
        raise ContractViolationError(f"excursions use different ramp lengths {sorted(ramps)}")

    clock = first.clock_freq
    excursions = []
    offset = 0
    for schedule in schedules:
        for start, end in schedule.corner_ticks():
            excursions.append(((start + offset) / clock, (end + offset) / clock))
        offset += schedule.n_ticks
    return ControlSchedule(
        clock_freq=clock,
        duration=offset / clock,
        kick_angle=angles.pop() if angles else first.kick_angle,
        amplitudes_q1=np.concatenate([s.amplitudes_q1 for s in schedules]),
        amplitudes_q2=np.concatenate([s.amplitudes_q2 for s in schedules]),
        excursions=tuple(excursions),
        n_ramp=ramps.pop() if ramps else first.n_ramp,
        flux_off=first.flux_off,
        flux_on=first.flux_on,
    )


def build_composite_gate(
    target: CompositeTarget,
    calibration: FsimCalibration | None,
    library: LayerLibrary | None,
    device: DeviceModel,
    *,
    z_compensate: bool = True,
) -> tuple[ControlSchedule, GateReport]:
    """Concatenate pre, fSim, mid, fSim, post and score the result in discrete mode.

    The schedule is returned on the sequence-file grid so that a written and
    re-read copy scores identically.
    """
    if calibration is None:
        raise CompositeDependencyError("composite gate needs a calibrated fSim excursion")
    if library is None:
        raise CompositeDependencyError("composite gate needs a single-qubit layer library")
    pieces = [
        library.schedule("pre"),
        calibration.schedule,
        library.schedule("mid"),
        calibration.schedule,
        library.schedule("post"),
    ]
    schedule = concatenate_schedules(pieces).quantized()
    report = evaluate_schedule(
        schedule, device, resolve_target(target), "exact-segment", z_compensate=z_compensate
    )
    logger.info(
        "composite %s: %.2f ns, fidelity %.6f", target, schedule.duration, report.fidelity
    )
    return schedule, report
