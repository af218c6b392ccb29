"""Correlation measures on Gaussian states.

All entropies are Renyi-2 in nats: S = 0.5 * ln det(2C).  The three parties
of the full model are labeled "x", "y" (optical modes) and "j" (collective
spin); the routines below accept any labeled covariance matrix with the
conventional (q, p) ordering per mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import symplectic
from .errors import NonPhysicalError, NotPureError, NumericalFailureError, UnknownModeError

#: Tolerance on det(2C) = 1 for pure-state checks.
PURITY_TOL = 1e-7


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric quadrature covariance matrix with labeled modes."""

    modes: tuple
    mat: np.ndarray

    def __post_init__(self):
        mat = symplectic._require_symmetric(self.mat)
        if mat.shape[0] != 2 * len(self.modes):
            raise ValueError(
                f"{len(self.modes)} modes require a {2 * len(self.modes)}x... matrix, "
                f"got {mat.shape}"
            )
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "mat", mat)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def _rows(self, keep):
        keep = set(keep)
        unknown = keep - set(self.modes)
        if unknown:
            raise UnknownModeError(f"unknown mode labels {sorted(unknown)}")
        rows = []
        labels = []
        for i, m in enumerate(self.modes):
            if m in keep:
                rows.extend((2 * i, 2 * i + 1))
                labels.append(m)
        return np.array(rows), tuple(labels)

    def reduce(self, keep) -> "CovarianceMatrix":
        """Principal submatrix on the kept modes (order of self.modes preserved)."""
        if not keep:
            raise UnknownModeError("keep must be a nonempty subset of modes")
        rows, labels = self._rows(keep)
        return CovarianceMatrix(labels, self.mat[np.ix_(rows, rows)])

    def symplectic_spectrum(self) -> np.ndarray:
        """Symplectic eigenvalues of 2C (>= 1 for physical states)."""
        return symplectic.symplectic_eigenvalues(2.0 * self.mat)

    def is_physical(self, tol: float = 1e-9) -> bool:
        try:
            return bool(self.symplectic_spectrum()[-1] >= 1.0 - tol)
        except NumericalFailureError:
            return False

    def det2(self) -> float:
        return float(np.linalg.det(2.0 * self.mat))

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return abs(self.det2() - 1.0) <= tol


def reduce(C: CovarianceMatrix, keep) -> CovarianceMatrix:
    """Module-level alias for CovarianceMatrix.reduce."""
    return C.reduce(keep)


def renyi2_entropy(C: CovarianceMatrix) -> float:
    """Renyi-2 entropy 0.5 * ln det(2C), in nats."""
    det2 = C.det2()
    if det2 < 1.0 - PURITY_TOL:
        raise NonPhysicalError(f"det(2C) = {det2:.6e} < 1; state is unphysical")
    return max(0.5 * math.log(det2), 0.0)


def mutual_information(C: CovarianceMatrix, partition) -> float:
    """S(A) + S(B) - S(AB) for two disjoint groups of modes of C."""
    side_a, side_b = (tuple(s) for s in partition)
    if set(side_a) & set(side_b):
        raise UnknownModeError("partition sides must be disjoint")
    s_a = renyi2_entropy(C.reduce(side_a))
    s_b = renyi2_entropy(C.reduce(side_b))
    s_ab = renyi2_entropy(C.reduce(side_a + side_b))
    return s_a + s_b - s_ab


def eof_pure_bipartition(C: CovarianceMatrix, side) -> float:
    """Entanglement of formation across side vs rest for a pure global state.

    For pure states this is the entanglement entropy, i.e. the Renyi-2
    entropy of the reduced state, and equals half the mutual information of
    the bipartition.
    """
    if not C.is_pure():
        raise NotPureError(f"det(2C) = {C.det2():.6e} is not 1 within {PURITY_TOL:.0e}")
    return renyi2_entropy(C.reduce(side))


#: Ties within this distance of a branch boundary take the middle branch.
BRANCH_TIE_TOL = 1e-10


def _g_value(ai: float, aj: float, ak: float) -> float:
    """Closed-form g for the two-of-three-mode Renyi-2 EoF: E = 0.5 ln g."""
    upper = math.sqrt(max(ai * ai + aj * aj - 1.0, 0.0))
    s = ai * ai + aj * aj
    d = ai * ai - aj * aj
    alpha = math.sqrt((2.0 * s + d * d + abs(d) * math.sqrt(d * d + 8.0 * s)) / (2.0 * s))

    on_tie = abs(ak - upper) <= BRANCH_TIE_TOL or abs(ak - alpha) <= BRANCH_TIE_TOL
    if not on_tie and ak >= upper:
        return 1.0
    if not on_tie and ak <= alpha:
        return max((d * d) / ((ak * ak - 1.0) ** 2), 1.0)

    delta = 1.0
    for mu in (1.0, -1.0):
        for nu in (1.0, -1.0):
            delta *= (ai + mu * aj + nu * ak) ** 2 - 1.0
    if delta < 0.0:
        if delta < -1e-12:
            raise NumericalFailureError(f"delta = {delta:.3e} strongly negative")
        delta = 0.0
    a1s, a2s, a3s = ai * ai, aj * aj, ak * ak
    beta = (
        2.0 * (a1s + a2s + a3s)
        + 2.0 * (a1s * a2s + a1s * a3s + a2s * a3s)
        - (a1s * a1s + a2s * a2s + a3s * a3s)
        - math.sqrt(delta)
        - 1.0
    )
    return max(beta / (8.0 * a3s), 1.0)


def _pair_eof_from_a(a: np.ndarray, i: int, j: int) -> float:
    k = 3 - i - j
    return 0.5 * math.log(_g_value(a[i], a[j], a[k]))


def eof_two_of_three(C: CovarianceMatrix, pair) -> float:
    """Renyi-2 Gaussian EoF between two of the three modes of a pure 3-mode state."""
    mi, mj = pair
    if mi == mj:
        raise UnknownModeError("pair must name two distinct modes")
    sf = symplectic.standard_form(C.mat)
    i, j = C.modes.index(mi), C.modes.index(mj)
    return _pair_eof_from_a(sf.a, i, j)


def tripartite_residual(C: CovarianceMatrix, anchor, pair) -> float:
    """Monogamy residual E(anchor : jk) - E(anchor : j) - E(anchor : k) >= 0."""
    j, k = pair
    e_all = eof_pure_bipartition(C, (anchor,))
    return e_all - eof_two_of_three(C, (anchor, j)) - eof_two_of_three(C, (anchor, k))


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation measures of one three-mode ground state.

    Entropies and mutual informations are in nats.  tri_x_yj is the genuine
    tripartite entanglement E(x;y:j) = S(j) - E(x:j) - E(y:j) and tri_j_yx
    is E(j;y:x) = S(x) - E(x:j) - E(x:y).  When diverged is set the numeric
    fields are NaN.
    """

    s_x: float = math.nan
    s_y: float = math.nan
    s_j: float = math.nan
    s_xy: float = math.nan
    s_xj: float = math.nan
    s_yj: float = math.nan
    mi_xy_j: float = math.nan
    mi_xj_y: float = math.nan
    mi_yj_x: float = math.nan
    mi_x_y: float = math.nan
    mi_x_j: float = math.nan
    mi_y_j: float = math.nan
    eof_x_j: float = math.nan
    eof_y_j: float = math.nan
    eof_x_y: float = math.nan
    tri_x_yj: float = math.nan
    tri_j_yx: float = math.nan
    diverged: bool = False

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def correlation_report(C: CovarianceMatrix | None, diverged: bool = False) -> CorrelationReport:
    """Assemble the full correlation report for a pure 3-mode ground state."""
    if diverged or C is None:
        return CorrelationReport(diverged=True)
    if set(C.modes) != {"x", "y", "j"}:
        raise UnknownModeError(f"expected modes x, y, j; got {C.modes}")
    if not C.is_pure():
        raise NotPureError(f"det(2C) = {C.det2():.6e} is not 1 within {PURITY_TOL:.0e}")

    s = {m: renyi2_entropy(C.reduce((m,))) for m in ("x", "y", "j")}
    s2 = {
        pair: renyi2_entropy(C.reduce(pair))
        for pair in (("x", "y"), ("x", "j"), ("y", "j"))
    }

    sf = symplectic.standard_form(C.mat, pure=True)
    idx = {m: C.modes.index(m) for m in C.modes}
    e_xj = _pair_eof_from_a(sf.a, idx["x"], idx["j"])
    e_yj = _pair_eof_from_a(sf.a, idx["y"], idx["j"])
    e_xy = _pair_eof_from_a(sf.a, idx["x"], idx["y"])

    return CorrelationReport(
        s_x=s["x"],
        s_y=s["y"],
        s_j=s["j"],
        s_xy=s2[("x", "y")],
        s_xj=s2[("x", "j")],
        s_yj=s2[("y", "j")],
        mi_xy_j=s2[("x", "y")] + s["j"],
        mi_xj_y=s2[("x", "j")] + s["y"],
        mi_yj_x=s2[("y", "j")] + s["x"],
        mi_x_y=s["x"] + s["y"] - s2[("x", "y")],
        mi_x_j=s["x"] + s["j"] - s2[("x", "j")],
        mi_y_j=s["y"] + s["j"] - s2[("y", "j")],
        eof_x_j=e_xj,
        eof_y_j=e_yj,
        eof_x_y=e_xy,
        # Residual anchored at the party written last: E(x;y:j) is anchored
        # at j against the pair (x, y), E(j;y:x) at x against (j, y).
        tri_x_yj=s["j"] - e_xj - e_yj,
        tri_j_yx=s["x"] - e_xj - e_xy,
        diverged=False,
    )
