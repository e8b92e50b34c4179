"""Per-stage optimizer checkpoints stored as JSON."""

from __future__ import annotations

import logging
from pathlib import Path

import orjson
from pydantic import BaseModel, ConfigDict, ValidationError
from sfqsim.shared.errors import ContractViolationError
from sfqsim.shared.files import atomic_write_bytes, read_input_bytes
from sfqsim.shared.schemas import OptimizerSettings, ScheduleTemplate

logger = logging.getLogger(__name__)


class StageCheckpoint(BaseModel):
    """Everything needed to continue an optimization after ``stage`` stages."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    target: str
    template: ScheduleTemplate
    settings: OptimizerSettings
    stage: int
    gamma: float
    mu: float
    theta: list[float]
    trajectory: list[float]

    @property
    def seed(self) -> int:
        return self.settings.seed

    def to_bytes(self) -> bytes:
        return orjson.dumps(self.model_dump(mode="json"), option=orjson.OPT_INDENT_2)

    @classmethod
    def from_bytes(cls, data: bytes) -> StageCheckpoint:
        try:
            return cls.model_validate(orjson.loads(data))
        except (orjson.JSONDecodeError, ValidationError) as exc:
            raise ContractViolationError(f"unreadable checkpoint: {exc}") from exc

    def write(self, path: Path) -> Path:
        atomic_write_bytes(path, self.to_bytes())
        logger.debug("checkpoint after stage %d written to %s", self.stage, path)
        return path

    @classmethod
    def read(cls, path: Path) -> StageCheckpoint:
        return cls.from_bytes(read_input_bytes(path, "checkpoint"))

    def check_compatible(
        self, target: str, template: ScheduleTemplate, settings: OptimizerSettings
    ) -> None:
        if (self.target, self.template, self.settings) != (target, template, settings):
            raise ContractViolationError(
                "checkpoint belongs to a different run (target, schedule or optimizer settings)"
            )
