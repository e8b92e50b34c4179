from sfqsim.control.backends import (
    BACKEND_REGISTRY,
    BackendName,
    ExactSegmentBackend,
    PropagatorBackend,
    PropagatorFactory,
    TrotterBackend,
    suzuki_sequence,
)
from sfqsim.control.checkpoint import StageCheckpoint
from sfqsim.control.fidelity import (
    GateReport,
    average_gate_fidelity,
    best_z_phases,
    evaluate_schedule,
    logical_report,
    rz_pair,
)
from sfqsim.control.optimizer import (
    CostBreakdown,
    OptimizationContext,
    OptimizationRun,
    ParameterLayout,
    RelaxedParams,
    binarized_fraction,
    cost,
    cost_and_gradient,
    gradient,
    optimize,
    relaxed_cost_report,
    round_and_snap,
)
from sfqsim.control.propagator import (
    KickOperators,
    evolve,
    kick_unitary,
    logical_matrix,
    propagate,
    propagate_logical,
    resolve_backend,
)
from sfqsim.control.schedule import (
    ControlSchedule,
    excursion_problems,
    flux_trajectory,
    idle_schedule,
)
from sfqsim.control.search import hyperparameter_search, rank_runs, sample_trials

__all__ = [
    # Schedules
    "ControlSchedule",
    "excursion_problems",
    "flux_trajectory",
    "idle_schedule",
    # Propagation
    "BACKEND_REGISTRY",
    "BackendName",
    "ExactSegmentBackend",
    "KickOperators",
    "PropagatorBackend",
    "PropagatorFactory",
    "TrotterBackend",
    "evolve",
    "kick_unitary",
    "logical_matrix",
    "propagate",
    "propagate_logical",
    "resolve_backend",
    "suzuki_sequence",
    # Fidelity
    "GateReport",
    "average_gate_fidelity",
    "best_z_phases",
    "evaluate_schedule",
    "logical_report",
    "rz_pair",
    # Optimization
    "CostBreakdown",
    "OptimizationContext",
    "OptimizationRun",
    "ParameterLayout",
    "RelaxedParams",
    "StageCheckpoint",
    "binarized_fraction",
    "cost",
    "cost_and_gradient",
    "gradient",
    "hyperparameter_search",
    "optimize",
    "rank_runs",
    "relaxed_cost_report",
    "round_and_snap",
    "sample_trials",
]
