from sfqsim.shared.errors import (
    BarrierDomainError,
    CalibrationFailedError,
    CompositeDependencyError,
    ConfigParseError,
    ContractViolationError,
    DegeneracyError,
    DegenerateInputError,
    FrameConstructionError,
    FsimExtractionError,
    InputFileError,
    InvalidAnglesError,
    InvalidCircuitError,
    LevelIdentificationError,
    OptimizationAbortedError,
    ScheduleModeError,
    SequenceFormatError,
    SfqSimError,
    SnapError,
    UnsupportedRatioError,
)
from sfqsim.shared.files import atomic_write_bytes, atomic_write_text, read_input_bytes
from sfqsim.shared.results import (
    CalibrationResult,
    DecompositionAngles,
    FsimParams,
    GateReportSummary,
    GridRow,
    RunSummary,
    SweepRow,
    wrap_angle,
)
from sfqsim.shared.schemas import (
    REFERENCE_PHI_OFF,
    REFERENCE_PHI_ON,
    BasisSettings,
    CalibrationSettings,
    CircuitParams,
    DecompositionSettings,
    OptimizerSettings,
    PenaltyConfig,
    ScheduleTemplate,
    SearchSpace,
)

__all__ = [
    # Errors
    "BarrierDomainError",
    "CalibrationFailedError",
    "CompositeDependencyError",
    "ConfigParseError",
    "ContractViolationError",
    "DegeneracyError",
    "DegenerateInputError",
    "FrameConstructionError",
    "FsimExtractionError",
    "InputFileError",
    "InvalidAnglesError",
    "InvalidCircuitError",
    "LevelIdentificationError",
    "OptimizationAbortedError",
    "ScheduleModeError",
    "SequenceFormatError",
    "SfqSimError",
    "SnapError",
    "UnsupportedRatioError",
    # Files
    "atomic_write_bytes",
    "atomic_write_text",
    "read_input_bytes",
    # Results
    "CalibrationResult",
    "DecompositionAngles",
    "FsimParams",
    "GateReportSummary",
    "GridRow",
    "RunSummary",
    "SweepRow",
    "wrap_angle",
    # Parameter sets
    "REFERENCE_PHI_OFF",
    "REFERENCE_PHI_ON",
    "BasisSettings",
    "CalibrationSettings",
    "CircuitParams",
    "DecompositionSettings",
    "OptimizerSettings",
    "PenaltyConfig",
    "ScheduleTemplate",
    "SearchSpace",
]
