"""fSim-type gates, their extraction from simulated blocks, and the two-fSim CZ.

Gamma(theta, phi) = exp(-i theta (XX + YY) / 2) exp(-i phi ZZ / 4). Two of
them, with opposite swap angles and a single-qubit X rotation in between, make
a CZ up to identical Z rotations on both qubits when the outer layers use the
angles from :func:`decomposition_angles`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from sfqsim.shared.errors import (
    ContractViolationError,
    DegenerateInputError,
    FsimExtractionError,
    InvalidAnglesError,
)
from sfqsim.shared.results import DecompositionAngles, FsimParams, wrap_angle

from .standard import CZ, IDENTITY, rx, rz

logger = logging.getLogger(__name__)

SIN_QUARTER_PI = math.sin(math.pi / 4)
BOUNDARY_SLACK = 1e-12
MAX_EXTRACTION_LEAKAGE = 1e-2
# Smallest |M00|, |M33| or |det| of the swap block still treated as fSim-like.
_MIN_BLOCK_WEIGHT = 1e-6
_CZ_SCAN_POINTS = 256
_NEWTON_STEPS = 8
_ZZ_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


def gamma_gate(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    swap = np.eye(4, dtype=complex)
    swap[1, 1] = swap[2, 2] = c
    swap[1, 2] = swap[2, 1] = -1j * s
    return swap * np.exp(-0.25j * phi * _ZZ_SIGNS)[None, :]


def common_z(zeta: float) -> np.ndarray:
    """Rz(zeta) (x) Rz(zeta)."""
    return np.kron(rz(zeta), rz(zeta))


def fsim_family(theta: float, phi: float, zeta: float) -> np.ndarray:
    return common_z(zeta) @ gamma_gate(theta, phi)


def is_valid_pair(theta: float, phi: float) -> bool:
    """Whether (theta, phi) admits the two-fSim CZ construction."""
    a = abs(math.sin(theta))
    b = abs(math.sin(phi / 2))
    s = SIN_QUARTER_PI
    slack = BOUNDARY_SLACK
    return (a <= s + slack and s <= b + slack) or (b <= s + slack and s <= a + slack)


def arcsin_argument(theta: float, phi: float) -> float:
    """sin(alpha)^2 = (1/2 - sin(phi/2)^2) / (sin(theta)^2 - sin(phi/2)^2)."""
    sp2 = math.sin(phi / 2) ** 2
    denominator = math.sin(theta) ** 2 - sp2
    if denominator == 0.0:
        raise DegenerateInputError(
            "sin(theta)^2 equals sin(phi/2)^2; alpha is undefined", theta=theta, phi=phi
        )
    return (0.5 - sp2) / denominator


def _arctan_branch(numerator: float, denominator: float) -> float:
    """arctan(numerator / denominator) + (pi/2)(1 - sgn(denominator))."""
    if denominator == 0.0:
        if numerator == 0.0:
            raise DegenerateInputError("0/0 in a decomposition angle")
        return math.copysign(math.pi / 2, numerator)
    return math.atan(numerator / denominator) + (math.pi / 2) * (
        1.0 - math.copysign(1.0, denominator)
    )


def decomposition_angles(theta: float, phi: float) -> DecompositionAngles:
    """Outer and middle rotation angles of the two-fSim CZ.

    Raises InvalidAnglesError outside the validity window and
    DegenerateInputError exactly on its corner |sin theta| = |sin phi/2| = sin(pi/4).
    """
    a = abs(math.sin(theta))
    b = abs(math.sin(phi / 2))
    if abs(a - SIN_QUARTER_PI) <= BOUNDARY_SLACK and abs(b - SIN_QUARTER_PI) <= BOUNDARY_SLACK:
        raise DegenerateInputError(
            "both sides of the validity condition equal sin(pi/4)", theta=theta, phi=phi
        )
    if not is_valid_pair(theta, phi):
        raise InvalidAnglesError(
            f"no CZ decomposition for theta={theta:.6g}, phi={phi:.6g}: need "
            "|sin theta| <= sin(pi/4) <= |sin phi/2| or the reverse",
            theta=theta,
            phi=phi,
        )
    argument = arcsin_argument(theta, phi)
    if not -BOUNDARY_SLACK <= argument <= 1.0 + BOUNDARY_SLACK:
        raise InvalidAnglesError(
            f"arcsin argument {argument:.3g} outside [0, 1]", theta=theta, phi=phi
        )
    alpha = math.asin(math.sqrt(min(max(argument, 0.0), 1.0)))
    tan_alpha = math.tan(alpha)
    xi = _arctan_branch(tan_alpha * math.cos(theta), math.cos(phi / 2))
    eta = _arctan_branch(tan_alpha * math.sin(theta), math.sin(phi / 2))
    return DecompositionAngles(xi=xi, eta=eta, alpha=alpha)


def assemble_cz(theta: float, phi: float, angles: DecompositionAngles) -> np.ndarray:
    """Circuit product, applied in time order:

    Rx(xi) (x) Rx(eta), Gamma(theta, phi), Rx(-2 alpha) (x) I, Gamma(-theta, phi),
    Rx(xi) (x) Rx(-eta).

    With Rx(a) = exp(-i a X / 2) the middle rotation carries -2 alpha; alpha
    enters the angle formulas only through sin(alpha)^2 and tan(alpha), so this
    is the alpha < 0 branch of the same family.
    """
    first = np.kron(rx(angles.xi), rx(angles.eta))
    middle = np.kron(rx(-2.0 * angles.alpha), IDENTITY)
    last = np.kron(rx(angles.xi), rx(-angles.eta))
    return last @ gamma_gate(-theta, phi) @ middle @ gamma_gate(theta, phi) @ first


@dataclass(frozen=True)
class CzClassFit:
    """U ~ exp(i global_phase) (Rz(zeta) (x) Rz(zeta)) CZ."""

    distance: float
    zeta: float
    global_phase: float

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.global_phase) * common_z(self.zeta) @ CZ


def _cz_overlap(u: np.ndarray, zeta: float) -> tuple[complex, complex, complex]:
    """Tr(V(zeta)^dagger U) and its first two zeta derivatives."""
    a, b, c = u[0, 0], -u[3, 3], u[1, 1] + u[2, 2]
    plus, minus = a * np.exp(1j * zeta), b * np.exp(-1j * zeta)
    return plus + minus + c, 1j * (plus - minus), -(plus + minus)


def cz_class_fit(unitary: np.ndarray) -> CzClassFit:
    """Closest member of the CZ class with identical Z rotations.

    Coarse scan over zeta, bounded refinement, then Newton steps on
    |Tr(V^dagger U)|^2; the global phase is the argument of that overlap.
    """
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (4, 4):
        raise ContractViolationError(f"expected a 4x4 matrix, got {u.shape}")

    def overlap_squared(zeta: float) -> float:
        return abs(_cz_overlap(u, zeta)[0]) ** 2

    grid = np.linspace(0.0, 2.0 * math.pi, _CZ_SCAN_POINTS, endpoint=False)
    values = [overlap_squared(z) for z in grid]
    best = float(grid[int(np.argmax(values))])
    step = grid[1] - grid[0]
    refined = minimize_scalar(
        lambda z: -overlap_squared(z),
        bounds=(best - step, best + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    zeta = float(refined.x)
    for _ in range(_NEWTON_STEPS):
        tau, d1, d2 = _cz_overlap(u, zeta)
        slope = 2.0 * (np.conj(tau) * d1).real
        curvature = 2.0 * (abs(d1) ** 2 + (np.conj(tau) * d2).real)
        if curvature >= 0.0:
            break
        zeta -= slope / curvature
    tau = _cz_overlap(u, zeta)[0]
    phase = float(np.angle(tau))
    fit = CzClassFit(distance=0.0, zeta=zeta, global_phase=phase)
    distance = float(np.linalg.norm(u - fit.matrix()))
    return CzClassFit(distance=distance, zeta=wrap_angle(zeta), global_phase=phase)


def distance_to_cz_class(unitary: np.ndarray) -> float:
    """min over zeta, gamma of ||U - exp(i gamma) (Rz(zeta) (x) Rz(zeta)) CZ||_F."""
    return cz_class_fit(unitary).distance


def _logical_fidelity(matrix: np.ndarray, fit: np.ndarray) -> float:
    purity = float(np.real(np.trace(matrix @ matrix.conj().T)))
    return (purity + abs(np.trace(fit.conj().T @ matrix)) ** 2) / 20.0


def extract_fsim(matrix: np.ndarray) -> FsimParams:
    """Fit M ~ exp(i g) (Rz(zeta) (x) Rz(zeta)) Gamma(theta, phi).

    phi comes from M00 M33 / det(swap block), zeta from M33 / M00 and theta
    from the phase-corrected swap block. A local search then maximizes the
    gate fidelity over (theta, phi, zeta) when that improves the fit.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (4, 4):
        raise ContractViolationError(f"expected a 4x4 logical matrix, got {m.shape}")
    leakage = 1.0 - float(np.real(np.trace(m.conj().T @ m))) / 4.0
    if leakage > MAX_EXTRACTION_LEAKAGE:
        raise FsimExtractionError(
            f"leakage {leakage:.3g} too large for fSim extraction", leakage=leakage
        )
    d00, d33 = m[0, 0], m[3, 3]
    block = m[1:3, 1:3]
    det = np.linalg.det(block)
    if min(abs(d00), abs(d33), abs(det)) < _MIN_BLOCK_WEIGHT:
        raise FsimExtractionError("matrix has no fSim structure (vanishing diagonal or block)")

    phi = wrap_angle(-float(np.angle(d00 * d33 / det)))
    zeta = float(np.angle(d33 / d00)) / 2.0
    phase = float(np.angle(d00)) + zeta + phi / 4.0
    rotated = block * np.exp(-1j * (phase + phi / 4.0))
    c = float(np.real(rotated[0, 0] + rotated[1, 1])) / 2.0
    s = -float(np.imag(rotated[0, 1] + rotated[1, 0])) / 2.0
    estimate = np.array([math.atan2(s, c), phi, zeta])

    def infidelity(x: np.ndarray) -> float:
        return 1.0 - _logical_fidelity(m, fsim_family(*x))

    start = infidelity(estimate)
    result = minimize(infidelity, estimate, method="BFGS")
    if result.fun < start - BOUNDARY_SLACK:
        logger.debug("fSim fit refined: infidelity %.3e -> %.3e", start, result.fun)
        estimate = np.asarray(result.x, dtype=float)

    theta, phi, zeta = (float(x) for x in estimate)
    fit = fsim_family(theta, phi, zeta)
    global_phase = float(np.angle(np.trace(fit.conj().T @ m)))
    residual = float(np.linalg.norm(m - np.exp(1j * global_phase) * fit))
    return FsimParams(
        theta=theta,
        phi=phi,
        single_z=wrap_angle(zeta),
        global_phase=global_phase,
        fit_fidelity=_logical_fidelity(m, fit),
        residual=residual,
    )
