"""Dense small-matrix routines: linear solves and nonsymmetric eigenvalues.

Eigenvalues of 2x2 and 3x3 matrices come from the closed-form roots of
the characteristic polynomial (the discriminant picks between the
trigonometric and Cardano branches, with an explicit repeated-root
branch so exact multiple eigenvalues stay exact).  Larger matrices fall
back to LAPACK via numpy (Hessenberg reduction plus shifted QR).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class LinAlgError(ArithmeticError):
    pass


class SingularMatrixError(LinAlgError):
    pass


class ConvergenceError(LinAlgError):
    pass


_PIVOT_RTOL = 1e-12


def solve_linear(a: Sequence[Sequence[float]], rhs: Sequence[float]) -> np.ndarray:
    """Solve A x = b by Gaussian elimination with partial pivoting.

    A pivot below 1e-12 times the largest entry of A is treated as
    singular.
    """
    A = np.array(a, dtype=float)
    b = np.array(rhs, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    if b.shape != (n,):
        raise ValueError("right-hand side length must match the matrix")
    scale = max(float(np.max(np.abs(A))), 1e-300)
    for col in range(n):
        piv = col + int(np.argmax(np.abs(A[col:, col])))
        if abs(A[piv, col]) < _PIVOT_RTOL * scale:
            raise SingularMatrixError(f"singular matrix (pivot {col + 1} below threshold)")
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, n):
            f = A[row, col] / A[col, col]
            if f != 0.0:
                A[row, col:] -= f * A[col, col:]
                b[row] -= f * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - A[row, row + 1 :] @ x[row + 1 :]) / A[row, row]
    return x


def characteristic_polynomial(a: Sequence[Sequence[float]]) -> np.ndarray:
    """Monic characteristic polynomial, descending coefficients, n <= 3."""
    A = np.asarray(a, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return np.array([1.0, -A[0, 0]])
    if n == 2:
        tr = A[0, 0] + A[1, 1]
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        return np.array([1.0, -tr, det])
    if n == 3:
        tr = A[0, 0] + A[1, 1] + A[2, 2]
        minors = (
            (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
            + (A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0])
            + (A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
        )
        det = (
            A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
            - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
            + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
        )
        return np.array([1.0, -tr, minors, -det])
    raise ValueError("characteristic polynomial implemented for n <= 3 only")


def _sorted_spectrum(values) -> np.ndarray:
    return np.array(sorted(values, key=lambda z: (z.real, z.imag)), dtype=complex)


def _quadratic_roots(b: float, c: float) -> list[complex]:
    # roots of t^2 + b t + c
    disc = b * b - 4.0 * c
    if disc < 0.0:
        re = -b / 2.0
        im = math.sqrt(-disc) / 2.0
        return [complex(re, -im), complex(re, im)]
    s = math.sqrt(disc)
    if b >= 0.0:
        q = -(b + s) / 2.0
    else:
        q = -(b - s) / 2.0
    r1 = q
    r2 = c / q if q != 0.0 else 0.0
    return [complex(r1), complex(r2)]


def _cubic_roots(c2: float, c1: float, c0: float) -> list[complex]:
    """Roots of t^3 + c2 t^2 + c1 t + c0 via the depressed cubic."""
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = c0 - c2 * c1 / 3.0 + 2.0 * c2**3 / 27.0
    disc = -4.0 * p**3 - 27.0 * q * q
    disc_tol = 1e-12 * (4.0 * abs(p) ** 3 + 27.0 * q * q)
    root_scale = max(abs(c2), abs(c1) ** 0.5, abs(c0) ** (1.0 / 3.0), 1e-150)

    if abs(disc) <= disc_tol:
        if abs(p) <= 1e-10 * root_scale**2:
            ts = [0.0, 0.0, 0.0]
        else:
            double = -3.0 * q / (2.0 * p)
            ts = [double, double, -2.0 * double]
        return [complex(t - shift) for t in ts]
    if disc > 0.0:
        # three distinct real roots; disc > 0 forces p < 0
        u = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * q / (p * u)))
        phi = math.acos(arg) / 3.0
        ts = [u * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]
        return [complex(t - shift) for t in ts]
    # one real root and a conjugate pair (Cardano)
    d = math.sqrt(q * q / 4.0 + p**3 / 27.0)
    if q >= 0.0:
        u_c = -((q / 2.0 + d) ** (1.0 / 3.0))
    else:
        u_c = (-q / 2.0 + d) ** (1.0 / 3.0)
    v_c = -p / (3.0 * u_c) if u_c != 0.0 else 0.0
    t_real = u_c + v_c
    re = -t_real / 2.0 - shift
    im = math.sqrt(3.0) / 2.0 * abs(u_c - v_c)
    return [complex(t_real - shift), complex(re, -im), complex(re, im)]


def eigenvalues(a: Sequence[Sequence[float]]) -> np.ndarray:
    """Eigenvalue multiset, sorted by (real, imag).

    n <= 3 uses the closed-form characteristic roots; larger matrices
    use LAPACK, with non-convergence surfaced as ConvergenceError.
    """
    A = np.asarray(a, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    if n == 1:
        return np.array([complex(A[0, 0])])
    if n == 2:
        coeffs = characteristic_polynomial(A)
        return _sorted_spectrum(_quadratic_roots(coeffs[1], coeffs[2]))
    if n == 3:
        coeffs = characteristic_polynomial(A)
        return _sorted_spectrum(_cubic_roots(coeffs[1], coeffs[2], coeffs[3]))
    try:
        vals = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    return _sorted_spectrum(vals.astype(complex))


def routh_hurwitz_stable(coeffs: Sequence[float]) -> bool:
    """Hurwitz test for a monic polynomial given in descending order.

    Degree 2: [1, c1, c0] is stable iff c1 > 0 and c0 > 0.
    Degree 3: [1, c2, c1, c0] is stable iff c2 > 0, c0 > 0 and c2*c1 > c0.
    """
    c = [float(v) for v in coeffs]
    if len(c) not in (3, 4):
        raise ValueError("only degree 2 and 3 polynomials are supported")
    if abs(c[0] - 1.0) > 1e-12:
        raise ValueError("polynomial must be monic")
    if len(c) == 3:
        return c[1] > 0.0 and c[2] > 0.0
    _, c2, c1, c0 = c
    return c2 > 0.0 and c0 > 0.0 and c2 * c1 > c0


def max_real_part(spectrum: Sequence[complex]) -> float:
    return max(float(z.real) for z in spectrum)


def spectral_verdict(spectrum: Sequence[complex], band: float) -> str:
    """Classify by the largest real part against a marginal band."""
    top = max_real_part(spectrum)
    if top < -band:
        return "stable"
    if top > band:
        return "unstable"
    return "marginal"


def char_value(a: np.ndarray, lam: complex) -> complex:
    """det(A - lam I): residual oracle for eigenvalue accuracy."""
    A = np.asarray(a, dtype=complex)
    M = A - lam * np.eye(A.shape[0])
    # direct cofactor for n <= 3, LU determinant otherwise
    n = A.shape[0]
    if n == 1:
        return M[0, 0]
    if n == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if n == 3:
        return (
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
    return complex(np.linalg.det(M))


def norm_inf(a: np.ndarray) -> float:
    A = np.asarray(a, dtype=float)
    if A.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(A), axis=1)))
