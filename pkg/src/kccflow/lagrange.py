"""Tangent-bundle geometry of the least-squares action along flow curves.

For a field X the action density is L(x, y) = |y - X(x)|^2 on states
(x, y) of the tangent bundle.  Its curves of stationary action satisfy
x'' + 2 G(x, x') = 0 with the semispray

    G = -1/2 [ (J - J^T) y + J^T X ],      J = dX/dx,

and the induced objects are

    N   = -1/2 (J - J^T)        nonlinear connection (skew),
    R_k = dN/dx^k               d-torsions (skew, one per coordinate),
    EYM = 1/2 tr(F F^T), F = -N electromagnetic-like field energy.

N, R_k and EYM depend on x alone for this action, so they take a point
rather than a full tangent state.  The associated canonical linear
connection has identically vanishing adapted coefficients for this
class of actions, so only the objects above are computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .vectorfield import VectorFieldModel, field_value, hessian_stack, jacobian


@dataclass(frozen=True)
class LagrangeGeometry:
    connection: np.ndarray
    torsions: tuple[np.ndarray, ...]
    energy: float


def _state(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]):
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != (m.n,) or yv.shape != (m.n,):
        raise ValueError(f"state vectors must have dimension {m.n}")
    return xv, yv


def lagrangian(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> float:
    """L(x, y) = sum_i (y_i - X_i(x))^2; zero exactly on the flow."""
    xv, yv = _state(m, x, y)
    r = yv - field_value(m, xv)
    return float(r @ r)


def semispray(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """G(x, y) = -1/2 [(J - J^T) y + J^T X(x)].

    Grouped as -1/2 [J y + (J^T X - J^T y)] so that on-flow states
    (y = X(x)) cancel the transpose terms bitwise, making the identity
    J X + 2 G(x, X) = 0 hold at machine zero.
    """
    xv, yv = _state(m, x, y)
    J = jacobian(m, xv)
    X = field_value(m, xv)
    Jt = J.T
    return -0.5 * (J @ yv + (Jt @ X - Jt @ yv))


def nonlinear_connection(m: VectorFieldModel, x: Sequence[float]) -> np.ndarray:
    """N = -1/2 (J - J^T); skew-symmetric by construction (exactly)."""
    xv = np.asarray(x, dtype=float)
    J = jacobian(m, xv)
    n = m.n
    N = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = -0.5 * (J[i, j] - J[j, i])
            N[i, j] = v
            N[j, i] = -v
    return N


def d_torsions(m: VectorFieldModel, x: Sequence[float]) -> list[np.ndarray]:
    """R_k[i, j] = dN_ij/dx^k from exact second derivatives; each skew."""
    xv = np.asarray(x, dtype=float)
    W = hessian_stack(m, xv)  # W[i, j, k] = d2X^i/dx^j dx^k
    n = m.n
    out = []
    for k in range(n):
        R = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                v = -0.5 * (W[i, j, k] - W[j, i, k])
                R[i, j] = v
                R[j, i] = -v
        out.append(R)
    return out


def yang_mills_energy(m: VectorFieldModel, x: Sequence[float]) -> float:
    """EYM = 1/2 tr(F F^T) with F = -N, i.e. the sum of N_ij^2 over i < j."""
    N = nonlinear_connection(m, x)
    total = 0.0
    for i in range(m.n):
        for j in range(i + 1, m.n):
            total += N[i, j] * N[i, j]
    return total


def lagrange_geometry(m: VectorFieldModel, x: Sequence[float]) -> LagrangeGeometry:
    return LagrangeGeometry(
        connection=nonlinear_connection(m, x),
        torsions=tuple(d_torsions(m, x)),
        energy=yang_mills_energy(m, x),
    )
