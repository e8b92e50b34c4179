"""Error hierarchy with stable identifiers for scripting."""

from __future__ import annotations

from typing import Any, ClassVar


class SfqSimError(Exception):
    """Base class for all simulator errors."""

    error_id: ClassVar[str] = "sfqsim-error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> dict[str, Any]:
        return {
            "error": self.error_id,
            "message": self.message,
            "details": {key: _plain(value) for key, value in self.details.items()},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return str(value)


class InvalidCircuitError(SfqSimError, ValueError):
    error_id = "invalid-circuit"


class ContractViolationError(SfqSimError, ValueError):
    error_id = "contract-violation"


class DegeneracyError(SfqSimError):
    error_id = "degenerate-levels"


class FrameConstructionError(SfqSimError):
    error_id = "frame-construction"


class LevelIdentificationError(SfqSimError):
    error_id = "level-identification"


class CalibrationFailedError(SfqSimError):
    error_id = "calibration-failed"

    def __init__(self, message: str, *, best_residual: float, **details: Any) -> None:
        super().__init__(message, best_residual=best_residual, **details)
        self.best_residual = best_residual


class ScheduleModeError(SfqSimError, ValueError):
    error_id = "schedule-mode"


class BarrierDomainError(SfqSimError, ValueError):
    error_id = "barrier-domain"


class OptimizationAbortedError(SfqSimError):
    error_id = "optimization-aborted"


class SnapError(SfqSimError, ValueError):
    error_id = "snap-error"

    def __init__(self, message: str, *, indices: list[int], **details: Any) -> None:
        super().__init__(message, indices=indices, **details)
        self.indices = indices


class InvalidAnglesError(SfqSimError, ValueError):
    error_id = "invalid-angles"


class DegenerateInputError(SfqSimError, ValueError):
    error_id = "degenerate-input"


class FsimExtractionError(SfqSimError):
    error_id = "fsim-extraction"


class CompositeDependencyError(SfqSimError):
    error_id = "missing-calibration"


class ConfigParseError(SfqSimError, ValueError):
    error_id = "config-parse"

    def __init__(
        self, message: str, *, key: str | None = None, line: int | None = None
    ) -> None:
        super().__init__(message, key=key, line=line)
        self.key = key
        self.line = line


class SequenceFormatError(SfqSimError, ValueError):
    error_id = "sequence-format"


class InputFileError(SfqSimError):
    error_id = "io-error"


class UnsupportedRatioError(SfqSimError, ValueError):
    error_id = "unsupported-ratio"
