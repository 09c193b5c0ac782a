"""Cotangent-bundle picture dual to the least-squares action.

The fiber derivative p_r = dL/dy^r = 2 (y_r - X_r) turns L into

    H(x, p) = 1/4 |p|^2 + <X(x), p>,

with the round trip H(x, p(y)) = <p, y> - L(x, y).  The induced
nonlinear connection on the cotangent side is

    N^H_ij = d2H/dx^j dp_i + d2H/dx^i dp_j = (J + J^T)_ij,

a symmetric matrix, with d-torsions

    R^H_k[i, j] = dN^H_ki/dx^j - dN^H_kj/dx^i = -2 R_k[i, j],

twice the negated tangent-side torsions.  The cotangent canonical
linear connection has identically vanishing adapted coefficients for
this Hamiltonian class, so it is not represented.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .vectorfield import VectorFieldModel, field_value, hessian_stack, jacobian


def _pair(m: VectorFieldModel, x: Sequence[float], v: Sequence[float]):
    xv = np.asarray(x, dtype=float)
    vv = np.asarray(v, dtype=float)
    if xv.shape != (m.n,) or vv.shape != (m.n,):
        raise ValueError(f"state vectors must have dimension {m.n}")
    return xv, vv


def hamiltonian(m: VectorFieldModel, x: Sequence[float], p: Sequence[float]) -> float:
    """H(x, p) = 1/4 |p|^2 + <X(x), p>."""
    xv, pv = _pair(m, x, p)
    return float(0.25 * (pv @ pv) + field_value(m, xv) @ pv)


def legendre_momenta(m: VectorFieldModel, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """Fiber derivative p = dL/dy = 2 (y - X(x))."""
    xv, yv = _pair(m, x, y)
    return 2.0 * (yv - field_value(m, xv))


def hamilton_connection(m: VectorFieldModel, x: Sequence[float]) -> np.ndarray:
    """N^H = J + J^T; symmetric by construction (exactly)."""
    xv = np.asarray(x, dtype=float)
    J = jacobian(m, xv)
    n = m.n
    N = np.zeros((n, n))
    for i in range(n):
        N[i, i] = 2.0 * J[i, i]
        for j in range(i + 1, n):
            v = J[i, j] + J[j, i]
            N[i, j] = v
            N[j, i] = v
    return N


def hamilton_torsions(m: VectorFieldModel, x: Sequence[float]) -> list[np.ndarray]:
    """R^H_k[i, j] = dN^H_ki/dx^j - dN^H_kj/dx^i, each skew-symmetric.

    N^H depends on x only, so the momentum part of the covariant
    derivative (-N_rj d/dp_r) annihilates and d/dx is the plain partial.
    With N^H_ki = J_ki + J_ik the entry expands to four Hessian reads;
    they are grouped so the two d2X^k terms cancel exactly, which makes
    the identity R^H_k = -2 R_k bitwise rather than approximate.
    """
    xv = np.asarray(x, dtype=float)
    W = hessian_stack(m, xv)  # W[i, j, k] = d2X^i/dx^j dx^k
    n = m.n
    out = []
    for k in range(n):
        R = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                v = (W[k, i, j] - W[k, j, i]) + (W[i, k, j] - W[j, k, i])
                R[i, j] = v
                R[j, i] = -v
        out.append(R)
    return out


def hamilton_flow_velocity(m: VectorFieldModel, x: Sequence[float], p: Sequence[float]) -> np.ndarray:
    """dH/dp = p/2 + X(x); equals X(x) exactly at p = 0."""
    xv, pv = _pair(m, x, p)
    return 0.5 * pv + field_value(m, xv)
