"""Device model: circuit Hamiltonian, spectral bases, logical frame, calibration."""

from sfqsim.device.basis import (
    ModeBasis,
    SpectralBasis,
    build_spectral_basis,
    coupling_hamiltonian,
    diagonalize_mode,
    joint_hamiltonian,
    local_hamiltonian,
    rediagonalized_joint_hamiltonian,
)
from sfqsim.device.calibration import (
    OnPointRow,
    OnPointScan,
    calibrate_idle,
    locate_on_point,
    spectrum_scan,
    zz_rate,
)
from sfqsim.device.charge_basis import ChargeBasisOperators, charge_basis_operators
from sfqsim.device.circuit import (
    MODES,
    ChargingMatrix,
    Mode,
    build_capacitance_matrix,
    charging_energy,
    josephson_energy,
    josephson_terms,
    single_mode_hamiltonian,
    split_junction_slopes,
    split_junction_terms,
)
from sfqsim.device.frame import (
    LOGICAL_LABELS,
    LogicalFrame,
    bare_index,
    build_logical_frame,
    lowdin_orthogonalize,
)
from sfqsim.device.model import DeviceModel, build_device
from sfqsim.device.table import FluxTable, exact_propagator, flux_operator_table, ramp_levels

__all__ = [
    # Circuit
    "MODES",
    "ChargeBasisOperators",
    "ChargingMatrix",
    "Mode",
    "build_capacitance_matrix",
    "charge_basis_operators",
    "charging_energy",
    "josephson_energy",
    "josephson_terms",
    "single_mode_hamiltonian",
    "split_junction_slopes",
    "split_junction_terms",
    # Bases
    "ModeBasis",
    "SpectralBasis",
    "build_spectral_basis",
    "coupling_hamiltonian",
    "diagonalize_mode",
    "joint_hamiltonian",
    "local_hamiltonian",
    "rediagonalized_joint_hamiltonian",
    # Frame and tables
    "LOGICAL_LABELS",
    "FluxTable",
    "LogicalFrame",
    "bare_index",
    "build_logical_frame",
    "exact_propagator",
    "flux_operator_table",
    "lowdin_orthogonalize",
    "ramp_levels",
    # Device bundle and calibration
    "DeviceModel",
    "OnPointRow",
    "OnPointScan",
    "build_device",
    "calibrate_idle",
    "locate_on_point",
    "spectrum_scan",
    "zz_rate",
]
