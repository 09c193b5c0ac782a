"""Deviation curvature and the Jacobi stability verdict.

The first invariant of the semispray is

    E^i = 2 G^i - N^i_j y^j = -1/2 (J - J^T)_ij y^j - (J^T X)_i,

and the deviation curvature matrix is

    P = (dN/dx^k) y^k + dE/dx   (covariant x-derivative of E),

where the covariant derivative d/dx^j acts as the horizontal lift
d/dx^j - N^r_j d/dy^r.  Written out with S = J - J^T and the component
Hessians W[i] = d2X^i/dxdx:

    P_ij = sum_k R_k[i,j] y_k
           - 1/2 sum_k (W[i][j,k] - W[k][i,j]) y_k
           - sum_k W[k][i,j] X_k  -  (J^T J)_ij  -  1/4 (S S)_ij.

Neighbouring stationary curves bunch together (Jacobi stability) exactly
when every eigenvalue of P has negative real part; a small band around
zero is reported as marginal instead of forcing a binary verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lagrange import d_torsions, nonlinear_connection, semispray
from .linalg import eigenvalues, norm_inf, spectral_verdict
from .vectorfield import VectorFieldModel, field_value, hessian_stack, jacobian

VERDICT_STABLE = "jacobi_stable"
VERDICT_UNSTABLE = "jacobi_unstable"
VERDICT_MARGINAL = "marginal"


@dataclass(frozen=True)
class DeviationReport:
    first_invariant: np.ndarray
    e_matrix: np.ndarray
    p_matrix: np.ndarray
    spectrum: np.ndarray
    verdict: str


def _state(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]):
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != (m.n,) or yv.shape != (m.n,):
        raise ValueError(f"state vectors must have dimension {m.n}")
    return xv, yv


def first_invariant(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """E = -1/2 (J - J^T) y - J^T X, the deviation part of the semispray."""
    xv, yv = _state(m, x, y)
    J = jacobian(m, xv)
    X = field_value(m, xv)
    return -0.5 * ((J - J.T) @ yv) - J.T @ X


def first_invariant_from_semispray(
    m: VectorFieldModel, x: Sequence[float], y: Sequence[float]
) -> np.ndarray:
    """The defining combination 2G - N y; agrees with the closed form."""
    xv, yv = _state(m, x, y)
    return 2.0 * semispray(m, xv, yv) - nonlinear_connection(m, xv) @ yv


def e_matrix(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """Covariant x-derivative of the first invariant, in closed form."""
    xv, yv = _state(m, x, y)
    J = jacobian(m, xv)
    X = field_value(m, xv)
    W = hessian_stack(m, xv)
    S = J - J.T
    term_y = np.einsum("ijk,k->ij", W, yv) - np.einsum("kij,k->ij", W, yv)
    term_x = np.einsum("kij,k->ij", W, X)
    return -0.5 * term_y - term_x - J.T @ J - 0.25 * (S @ S)


def deviation_matrix(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """P = sum_k R_k y^k + dE/dx; linear in y."""
    xv, yv = _state(m, x, y)
    torsion_term = np.zeros((m.n, m.n))
    for k, R in enumerate(d_torsions(m, xv)):
        torsion_term += R * yv[k]
    return torsion_term + e_matrix(m, xv, yv)


def marginal_band(p: np.ndarray) -> float:
    # the strict sign test needs a numerical tolerance; scale with P
    return 1e-9 * (1.0 + norm_inf(p))


def jacobi_classify(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> DeviationReport:
    """Full deviation report with the Jacobi verdict at one state."""
    xv, yv = _state(m, x, y)
    E = first_invariant(m, xv, yv)
    Em = e_matrix(m, xv, yv)
    P = deviation_matrix(m, xv, yv)
    spectrum = eigenvalues(P)
    verdict = spectral_verdict(spectrum, marginal_band(P))
    if verdict == "stable":
        verdict = VERDICT_STABLE
    elif verdict == "unstable":
        verdict = VERDICT_UNSTABLE
    return DeviationReport(E, Em, P, spectrum, verdict)
