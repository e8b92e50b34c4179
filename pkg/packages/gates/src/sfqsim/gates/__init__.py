from sfqsim.gates.composite import (
    CompositeLayers,
    LayerLibrary,
    build_composite_gate,
    composite_layer_targets,
    composite_unitary,
    concatenate_schedules,
    synthesize_layer_library,
)
from sfqsim.gates.fsim import (
    CzClassFit,
    arcsin_argument,
    assemble_cz,
    cz_class_fit,
    decomposition_angles,
    distance_to_cz_class,
    extract_fsim,
    fsim_family,
    gamma_gate,
    is_valid_pair,
)
from sfqsim.gates.grid import single_qubit_grid
from sfqsim.gates.standard import (
    CNOT,
    CZ,
    ISWAP,
    STANDARD_GATES,
    on_qubit,
    resolve_target,
    rx,
    rz,
)
from sfqsim.gates.sweep import (
    FsimCalibration,
    best_row,
    calibrate_fsim,
    fsim_schedule,
    hold_grid,
    hold_time_sweep,
    local_minima,
)

__all__ = [
    # Standard gates
    "CNOT",
    "CZ",
    "ISWAP",
    "STANDARD_GATES",
    "on_qubit",
    "resolve_target",
    "rx",
    "rz",
    # fSim decomposition
    "CzClassFit",
    "arcsin_argument",
    "assemble_cz",
    "cz_class_fit",
    "decomposition_angles",
    "distance_to_cz_class",
    "extract_fsim",
    "fsim_family",
    "gamma_gate",
    "is_valid_pair",
    # Calibration sweep
    "FsimCalibration",
    "best_row",
    "calibrate_fsim",
    "fsim_schedule",
    "hold_grid",
    "hold_time_sweep",
    "local_minima",
    # Composite gates
    "CompositeLayers",
    "LayerLibrary",
    "build_composite_gate",
    "composite_layer_targets",
    "composite_unitary",
    "concatenate_schedules",
    "single_qubit_grid",
    "synthesize_layer_library",
]
