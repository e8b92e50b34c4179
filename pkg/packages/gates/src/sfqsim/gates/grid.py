"""Single-qubit gate quality across clock frequencies, kick angles and durations."""

from __future__ import annotations

import logging
import math
from itertools import product

from pydantic import ValidationError
from sfqsim.control.optimizer import OptimizationRun, optimize
from sfqsim.device.model import DeviceModel
from sfqsim.shared.errors import SfqSimError
from sfqsim.shared.results import GridRow
from sfqsim.shared.schemas import OptimizerSettings, ScheduleTemplate

from .standard import on_qubit, rx

logger = logging.getLogger(__name__)


def single_qubit_grid(
    device: DeviceModel,
    clock_kick_pairs: list[tuple[float, float]],
    durations: list[float],
    settings: OptimizerSettings,
    *,
    qubit: int = 1,
    angle: float = math.pi / 2,
) -> list[GridRow]:
    """Optimize Rx(angle) on ``qubit`` for every (clock, kick angle) x duration."""
    target = on_qubit(rx(angle), qubit)
    rows = []
    for (clock_freq, kick_angle), duration in product(clock_kick_pairs, durations):
        row = GridRow(clock_freq=clock_freq, kick_angle=kick_angle, duration=duration)
        try:
            template = ScheduleTemplate(
                clock_freq=clock_freq, duration=duration, kick_angle=kick_angle, excursions=0
            )
            run = optimize(
                OptimizationRun(
                    target=f"rx-q{qubit}",
                    target_matrix=target,
                    template=template,
                    settings=settings,
                ),
                device,
            )
        except (SfqSimError, ValidationError) as exc:
            logger.warning(
                "grid point %.1f GHz, %.4f rad, %.1f ns failed: %s",
                clock_freq,
                kick_angle,
                duration,
                exc,
            )
            rows.append(row.model_copy(update={"status": "failed"}))
            continue
        rows.append(
            row.model_copy(
                update={"fidelity": run.report.fidelity, "leakage": run.report.leakage}
            )
        )
        logger.info(
            "grid point %.1f GHz, %.1f ns: fidelity %.6f",
            clock_freq,
            duration,
            run.report.fidelity,
        )
    return rows
