"""Two-mode Dicke model in the thermodynamic limit.

Classical ground state, phase identification, quadratic fluctuation matrices,
excitation gaps and the ground-state covariance matrix.  Quadrature ordering
is (q_x, p_x, q_y, p_y, Q, P) with Q, P the collective-spin quadratures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import symplectic
from .errors import GoldstoneLineError
from .gaussian_info import CovarianceMatrix

#: Relative offset used when a quantity on the degenerate coupling line
#: lambda_x = lambda_y > lambda_c must be evaluated as a limit.
LIMIT_EPSILON = 1e-6


class Phase(Enum):
    NORMAL = "normal"
    SUPERRADIANT_X = "superradiant-x"
    SUPERRADIANT_Y = "superradiant-y"


@dataclass(frozen=True)
class ModelParams:
    """Frequencies and couplings; energies are dimensionless multiples of omega."""

    omega: float = 1.0
    omega0: float = 1.0
    lambda_x: float = 0.0
    lambda_y: float = 0.0

    def __post_init__(self):
        if self.omega <= 0.0 or self.omega0 <= 0.0:
            raise ValueError("omega and omega0 must be positive")
        if self.lambda_x < 0.0 or self.lambda_y < 0.0:
            raise ValueError("couplings must be nonnegative")

    @property
    def lambda_c(self) -> float:
        return math.sqrt(self.omega * self.omega0)

    def with_couplings(self, lambda_x: float, lambda_y: float) -> "ModelParams":
        return replace(self, lambda_x=lambda_x, lambda_y=lambda_y)

    def on_goldstone_line(self) -> bool:
        return self.lambda_x == self.lambda_y and self.lambda_x > self.lambda_c


@dataclass(frozen=True)
class ClassicalGroundState:
    phase: Phase
    alpha_x: float
    alpha_y: float
    theta: float
    phi: float
    energy: float


@dataclass(frozen=True)
class ExcitationSpectrum:
    """Normal-mode gaps nu_1 >= nu_2 >= nu_3 >= 0."""

    nu: tuple


def classical_ground_state(p: ModelParams) -> ClassicalGroundState:
    """Minimizer of the classical energy landscape and the ground-state energy."""
    lc = p.lambda_c
    lx, ly = p.lambda_x, p.lambda_y
    if max(lx, ly) <= lc:
        return ClassicalGroundState(
            phase=Phase.NORMAL, alpha_x=0.0, alpha_y=0.0, theta=math.pi, phi=0.0,
            energy=-p.omega0,
        )
    if lx == ly:
        raise GoldstoneLineError(
            "lambda_x = lambda_y above the critical point: ground state is degenerate; "
            "approach the line as a limit"
        )
    if lx > ly:
        ct = -(lc / lx) ** 2
        alpha = -(lx / p.omega) * math.sqrt(1.0 - (lc / lx) ** 4)
        return ClassicalGroundState(
            phase=Phase.SUPERRADIANT_X, alpha_x=alpha, alpha_y=0.0,
            theta=math.acos(ct), phi=0.0,
            energy=-(lx**4 + lc**4) / (2.0 * lx**2 * p.omega),
        )
    ct = -(lc / ly) ** 2
    alpha = -(ly / p.omega) * math.sqrt(1.0 - (lc / ly) ** 4)
    return ClassicalGroundState(
        phase=Phase.SUPERRADIANT_Y, alpha_x=0.0, alpha_y=alpha,
        theta=math.acos(ct), phi=math.pi / 2.0,
        energy=-(ly**4 + lc**4) / (2.0 * ly**2 * p.omega),
    )


def ground_state_energy(p: ModelParams) -> float:
    """Ground-state energy per spin; well defined by continuity on the degenerate line."""
    lc = p.lambda_c
    lm = max(p.lambda_x, p.lambda_y)
    if lm <= lc:
        return -p.omega0
    return -(lm**4 + lc**4) / (2.0 * lm**2 * p.omega)


def fluctuation_matrix(p: ModelParams) -> np.ndarray:
    """Quadratic-fluctuation matrix K of the stable phase (6x6, symmetric)."""
    gs = classical_ground_state(p)
    w, lc = p.omega, p.lambda_c
    lx, ly = p.lambda_x, p.lambda_y
    K = np.diag([w, w, w, w, 0.0, 0.0])
    if gs.phase is Phase.NORMAL:
        K[4, 4] = K[5, 5] = lc**2 / w
        K[0, 4] = K[4, 0] = lx
        K[2, 5] = K[5, 2] = ly
    elif gs.phase is Phase.SUPERRADIANT_X:
        K[4, 4] = K[5, 5] = lx**2 / w
        K[0, 4] = K[4, 0] = -lc**2 / lx
        K[2, 5] = K[5, 2] = ly
    else:
        K[4, 4] = K[5, 5] = ly**2 / w
        K[2, 4] = K[4, 2] = lc**2 / ly
        K[0, 5] = K[5, 0] = lx
    return K


def excitation_gaps(p: ModelParams) -> ExcitationSpectrum:
    """Normal-mode gaps, sorted descending.

    On the degenerate line lambda_x = lambda_y > lambda_c the gaps are
    evaluated as a limit from both sides; the soft mode is reported as
    exactly zero.
    """
    if p.on_goldstone_line():
        eps = LIMIT_EPSILON
        lo = symplectic.symplectic_eigenvalues(
            fluctuation_matrix(p.with_couplings(p.lambda_x * (1.0 - eps), p.lambda_y))
        )
        hi = symplectic.symplectic_eigenvalues(
            fluctuation_matrix(p.with_couplings(p.lambda_x * (1.0 + eps), p.lambda_y))
        )
        if np.max(np.abs(lo[:2] - hi[:2])) > 1e-3 * max(1.0, lo[0]):
            raise GoldstoneLineError("one-sided limits of the gapped modes disagree")
        nu = 0.5 * (lo + hi)
        return ExcitationSpectrum(nu=(float(nu[0]), float(nu[1]), 0.0))
    nu = symplectic.symplectic_eigenvalues(fluctuation_matrix(p))
    return ExcitationSpectrum(nu=tuple(float(v) for v in nu))


def ground_state_cm(p: ModelParams) -> CovarianceMatrix:
    """Ground-state covariance matrix C = (M M^T)^{-1} / 2 over modes (x, y, j)."""
    K = fluctuation_matrix(p)
    dec = symplectic.williamson(K)
    mm = dec.M @ dec.M.T
    C = 0.5 * np.linalg.inv(mm)
    return CovarianceMatrix(("x", "y", "j"), 0.5 * (C + C.T))


@dataclass(frozen=True)
class ScanPoint:
    coupling: float
    energy: float
    d1: float
    d2: float


def _jump_index(values: np.ndarray, threshold_factor: float = 10.0):
    """Index of an isolated jump in a sampled function, or None.

    A jump is a single first difference far above the bulk (75th percentile)
    of the others; smooth kinks spread over the grid spacing do not trigger.
    """
    good = np.isfinite(values)
    diffs = np.abs(np.diff(values[good]))
    if diffs.size < 4:
        return None
    scale = max(np.max(np.abs(values[good])), 1.0)
    floor = 1e-9 * scale
    bulk = np.percentile(diffs, 75.0) + floor
    imax = int(np.argmax(diffs))
    if diffs[imax] <= threshold_factor * bulk:
        return None
    # Map back to an index into the original (possibly nan-padded) array.
    return int(np.nonzero(good)[0][imax])


def gs_energy_derivative_scan(p: ModelParams, axis: str, grid):
    """Finite-difference energy derivatives along one coupling axis.

    Returns (points, jumps): one ScanPoint per grid value, with staggered
    forward differences re-centered onto the grid (nan at the edges), and a
    dict flagging the bin of a first-order jump (in dE) and of a
    second-order jump (in d2E).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 5 or np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing with at least 5 points")
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")

    def params_at(val):
        if axis == "x":
            return p.with_couplings(val, p.lambda_y)
        return p.with_couplings(p.lambda_x, val)

    energy = np.array([ground_state_energy(params_at(v)) for v in grid])
    h = np.diff(grid)
    d1_mid = np.diff(energy) / h                      # at midpoints
    d2_grid = np.full(grid.size, np.nan)
    d2_grid[1:-1] = np.diff(d1_mid) / (0.5 * (h[1:] + h[:-1]))
    d1_grid = np.full(grid.size, np.nan)
    d1_grid[1:-1] = 0.5 * (d1_mid[1:] + d1_mid[:-1])

    points = [
        ScanPoint(coupling=float(grid[i]), energy=float(energy[i]),
                  d1=float(d1_grid[i]), d2=float(d2_grid[i]))
        for i in range(grid.size)
    ]
    jumps = {
        "first_order": _jump_index(d1_mid),
        "second_order": _jump_index(d2_grid),
    }
    return points, jumps
