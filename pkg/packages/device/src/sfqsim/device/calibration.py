"""Idle-point flux calibration and coupler-flux scans."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from sfqsim.shared.errors import CalibrationFailedError
from sfqsim.shared.results import CalibrationResult
from sfqsim.shared.schemas import BasisSettings, CalibrationSettings, CircuitParams

from .basis import rediagonalized_joint_hamiltonian
from .circuit import charging_energy
from .frame import LogicalFrame, bare_index
from .model import DeviceModel, build_device

logger = logging.getLogger(__name__)

SIMPLEX_STEP = 0.002


def khz_to_rad_per_ns(khz: float) -> float:
    return 2.0 * math.pi * khz * 1e-6


def zz_rate(h_idle: np.ndarray, frame: LogicalFrame) -> float:
    """E_11 - E_10 - E_01 + E_00 of the logical states under ``h_idle``."""
    states = frame.states
    e00, e01, e10, e11 = np.real(np.einsum("ij,ik,kj->j", states.conj(), h_idle, states))
    return float(e11 - e10 - e01 + e00)


def _excitations(hamiltonian: np.ndarray) -> tuple[float, float]:
    energies = np.linalg.eigvalsh(hamiltonian)[:3]
    return float(energies[1] - energies[0]), float(energies[2] - energies[0])


def calibrate_idle(
    params: CircuitParams,
    target_freq: float,
    initial_guess: Sequence[float] | None = None,
    *,
    settings: CalibrationSettings | None = None,
    basis: BasisSettings | None = None,
) -> CalibrationResult:
    """Find idle fluxes with equal qubit frequencies at ``target_freq`` (rad/ns).

    Each evaluation re-diagonalizes every mode at the trial fluxes.
    """
    settings = settings or CalibrationSettings()
    basis = basis or BasisSettings()
    guess = np.asarray(
        settings.initial_guess if initial_guess is None else initial_guess, dtype=float
    )
    charging = charging_energy(params)
    evaluations = 0

    def objective(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        h = rediagonalized_joint_hamiltonian(
            params,
            charging,
            (float(x[0]), float(x[1]), float(x[2])),
            levels=basis.levels,
            n_max=basis.n_max,
        )
        e1, e2 = _excitations(h)
        value = (e1 - e2) ** 2 + (e1 - target_freq) ** 2 + (e2 - target_freq) ** 2
        logger.debug("calibration eval %d: x=%s objective=%.3e", evaluations, x, value)
        return value

    simplex = np.vstack([guess, guess + SIMPLEX_STEP * np.eye(3)])
    result = minimize(
        objective,
        guess,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": 1e-10,
            "fatol": 1e-18,
            "maxiter": settings.max_iterations,
            "maxfev": 2 * settings.max_iterations,
        },
    )
    tolerance = khz_to_rad_per_ns(settings.tolerance_khz) ** 2
    if not result.fun < tolerance:
        raise CalibrationFailedError(
            "idle calibration did not reach tolerance",
            best_residual=float(result.fun),
            evaluations=evaluations,
        )

    phi_off = tuple(float(x) % 1.0 for x in result.x)
    phi_on = (phi_off[0], params.phi_on[1], phi_off[2])
    device = build_device(params, phi_off, phi_on, basis=basis)  # type: ignore[arg-type]
    e1, e2 = _excitations(device.h_idle)
    freqs = device.frame.energies - device.frame.energies[0]
    logger.info(
        "calibrated idle fluxes %s after %d evaluations (objective %.3e)",
        phi_off,
        evaluations,
        result.fun,
    )
    return CalibrationResult(
        phi_off=phi_off,  # type: ignore[arg-type]
        phi_on=phi_on,
        qubit_freqs=(float(freqs[1]), float(freqs[2])),
        splitting=abs(e2 - e1),
        zz_idle=zz_rate(device.h_idle, device.frame),
        objective=float(result.fun),
        evaluations=evaluations,
    )


@dataclass(frozen=True)
class OnPointRow:
    coupler_flux: float
    splitting: float
    leakage: float


@dataclass(frozen=True)
class OnPointScan:
    best_flux: float
    rows: tuple[OnPointRow, ...]


def locate_on_point(
    device: DeviceModel,
    coupler_fluxes: Sequence[float],
    *,
    max_leakage: float = 1e-2,
) -> OnPointScan:
    """Coupler flux with the widest dressed 01/10 splitting below ``max_leakage``.

    Leakage is the non-computational weight of the two eigenstates that
    carry most of the bare |001> and |100> population.
    """
    levels = device.levels
    single = [bare_index(levels, 0, 0, 1), bare_index(levels, 1, 0, 0)]
    rows = []
    for flux in coupler_fluxes:
        energies, vectors = np.linalg.eigh(device.hamiltonian(float(flux)))
        weight = np.sum(np.abs(vectors[single, :]) ** 2, axis=0)
        pair = np.argsort(weight)[-2:]
        rows.append(
            OnPointRow(
                coupler_flux=float(flux),
                splitting=float(abs(energies[pair[1]] - energies[pair[0]])),
                leakage=float(1.0 - weight[pair].mean()),
            )
        )
    allowed = [row for row in rows if row.leakage <= max_leakage]
    if not allowed:
        raise CalibrationFailedError(
            "no coupler flux keeps the single-excitation pair below the leakage bound",
            best_residual=min(row.leakage for row in rows) if rows else math.inf,
        )
    best = max(allowed, key=lambda row: row.splitting)
    logger.info(
        "on point %.4f Phi0 with splitting %.4g rad/ns", best.coupler_flux, best.splitting
    )
    return OnPointScan(best_flux=best.coupler_flux, rows=tuple(rows))


def spectrum_scan(
    device: DeviceModel, coupler_fluxes: Sequence[float], count: int = 10
) -> np.ndarray:
    """Lowest ``count`` joint eigenvalues for each coupler flux, one row per flux."""
    return np.array(
        [np.linalg.eigvalsh(device.hamiltonian(float(f)))[:count] for f in coupler_fluxes]
    )
