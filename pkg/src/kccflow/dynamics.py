"""Equilibria and fixed-step integration of the flow and its action form.

Equilibria of the competition model are enumerated by support: for each
subset S of species the linear subsystem sum_{j in S} a_ij x_j = b_i
(i in S) is solved and kept when strictly positive on S.  Each
equilibrium carries a linear (spectrum of J) and a Jacobi (spectrum of
the deviation curvature at rest velocity) verdict.

Integration is the classical fixed-step fourth-order one-step scheme,
for reproducibility; divergence is reported through a truncation flag
instead of adaptive stepping.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .expressions import EvaluationError
from .kcc import jacobi_classify
from .lagrange import semispray
from .linalg import (
    SingularMatrixError,
    eigenvalues,
    max_real_part,
    norm_inf,
    solve_linear,
    spectral_verdict,
)
from .vectorfield import ModelError, VectorFieldModel, field_value, jacobian

TRUNCATION_BOUND = 1e12


@dataclass(frozen=True)
class Equilibrium:
    x: np.ndarray
    support: tuple[int, ...]  # 1-based species indices with positive population
    lyapunov: str
    max_re_jacobian: float
    jacobi: str
    max_re_deviation: float


@dataclass(frozen=True)
class EquilibriaResult:
    equilibria: tuple[Equilibrium, ...]
    skipped: tuple[str, ...]  # diagnostics for singular supports


@dataclass(frozen=True)
class Trajectory:
    step: float
    samples: np.ndarray  # rows (t, x1..xn[, y1..yn])
    has_velocity: bool
    truncated: bool = False
    truncated_at: float | None = None


def support_label(support: Sequence[int]) -> str:
    return "+".join(str(i) for i in support) if support else "-"


def equilibria(m: VectorFieldModel) -> EquilibriaResult:
    """All nonnegative equilibria of a competition model, by support."""
    if m.kind != "lotka_volterra":
        raise ModelError("equilibria enumeration requires a lotka_volterra system")
    A = np.array(m.a, dtype=float)
    b = np.array(m.b, dtype=float)
    found: list[Equilibrium] = []
    skipped: list[str] = []
    for size in range(m.n + 1):
        for subset in combinations(range(m.n), size):
            x = np.zeros(m.n)
            if subset:
                idx = list(subset)
                try:
                    xs = solve_linear(A[np.ix_(idx, idx)], b[idx])
                except SingularMatrixError:
                    skipped.append(
                        f"support {support_label([i + 1 for i in subset])}: singular subsystem"
                    )
                    continue
                if not np.all(xs > 0.0):
                    continue
                x[idx] = xs
            J = jacobian(m, x)
            spec_j = eigenvalues(J)
            report = jacobi_classify(m, x, np.zeros(m.n))
            found.append(
                Equilibrium(
                    x=x,
                    support=tuple(i + 1 for i in subset),
                    lyapunov=spectral_verdict(spec_j, 1e-9 * norm_inf(J)),
                    max_re_jacobian=max_real_part(spec_j),
                    jacobi=report.verdict,
                    max_re_deviation=max_real_part(report.spectrum),
                )
            )
    return EquilibriaResult(tuple(found), tuple(skipped))


def _rk4(
    f: Callable[[np.ndarray], np.ndarray],
    z0: np.ndarray,
    h: float,
    steps: int,
) -> tuple[np.ndarray, bool, float | None]:
    rows = [np.concatenate(([0.0], z0))]
    z = z0
    truncated = False
    truncated_at = None
    for k in range(1, steps + 1):
        t = k * h
        try:
            k1 = f(z)
            k2 = f(z + 0.5 * h * k1)
            k3 = f(z + 0.5 * h * k2)
            k4 = f(z + h * k3)
            z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        except EvaluationError:
            truncated, truncated_at = True, t
            break
        if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > TRUNCATION_BOUND:
            truncated, truncated_at = True, t
            break
        rows.append(np.concatenate(([t], z)))
    return np.array(rows), truncated, truncated_at


def _check_integration_args(m: VectorFieldModel, x0: Sequence[float], h: float, steps: int):
    if h <= 0.0:
        raise ValueError("step size h must be positive")
    if steps < 1:
        raise ValueError("step count must be at least 1")
    x = np.asarray(x0, dtype=float)
    if x.shape != (m.n,):
        raise ValueError(f"initial point must have dimension {m.n}")
    return x


def integrate_flow(
    m: VectorFieldModel, x0: Sequence[float], h: float, steps: int
) -> Trajectory:
    """Integrate x' = X(x) from x0 with fixed step h."""
    x = _check_integration_args(m, x0, h, steps)
    samples, truncated, t_stop = _rk4(lambda z: field_value(m, z), x, h, steps)
    return Trajectory(h, samples, False, truncated, t_stop)


def integrate_euler_lagrange(
    m: VectorFieldModel, x0: Sequence[float], y0: Sequence[float], h: float, steps: int
) -> Trajectory:
    """Integrate the action form x'' + 2G(x, x') = 0 as (x' = y, y' = -2G)."""
    x = _check_integration_args(m, x0, h, steps)
    y = np.asarray(y0, dtype=float)
    if y.shape != (m.n,):
        raise ValueError(f"initial velocity must have dimension {m.n}")
    n = m.n

    def f(z: np.ndarray) -> np.ndarray:
        return np.concatenate((z[n:], -2.0 * semispray(m, z[:n], z[n:])))

    samples, truncated, t_stop = _rk4(f, np.concatenate((x, y)), h, steps)
    return Trajectory(h, samples, True, truncated, t_stop)


def el_residual_series(m: VectorFieldModel, traj: Trajectory) -> np.ndarray:
    """Per-interior-sample residual |D2x + 2G(x, Dx)|_inf of the action form.

    D2 and D are the central second and first differences on the grid, so
    the residual of an exact flow trajectory shrinks like h^2.
    """
    if traj.samples.shape[0] < 3:
        raise ValueError("residual needs at least 3 samples")
    h = traj.step
    xs = traj.samples[:, 1 : 1 + m.n]
    out = np.zeros(traj.samples.shape[0] - 2)
    for k in range(1, traj.samples.shape[0] - 1):
        d2 = (xs[k + 1] - 2.0 * xs[k] + xs[k - 1]) / (h * h)
        d1 = (xs[k + 1] - xs[k - 1]) / (2.0 * h)
        out[k - 1] = np.max(np.abs(d2 + 2.0 * semispray(m, xs[k], d1)))
    return out


def el_residual(m: VectorFieldModel, traj: Trajectory) -> float:
    """Largest interior residual of the action form along a trajectory."""
    return float(np.max(el_residual_series(m, traj)))


def _g17(value: float) -> str:
    return f"{float(value):.17g}"


def trajectory_csv(m: VectorFieldModel, traj: Trajectory, residual: bool = False) -> str:
    """CSV with 17 significant digits: t,x1..xn[,y1..yn][,residual].

    The residual column holds the central-difference action residual and
    is empty on the two boundary rows.  Truncated runs end with a
    comment line noting the truncation time.
    """
    n = m.n
    header = ["t"] + [f"x{i + 1}" for i in range(n)]
    if traj.has_velocity:
        header += [f"y{i + 1}" for i in range(n)]
    res_values = None
    if residual:
        header.append("residual")
        res_values = el_residual_series(m, traj) if traj.samples.shape[0] >= 3 else np.zeros(0)
    lines = [",".join(header)]
    total = traj.samples.shape[0]
    for k in range(total):
        cells = [_g17(v) for v in traj.samples[k]]
        if residual:
            interior = 1 <= k <= total - 2
            cells.append(_g17(res_values[k - 1]) if interior else "")
        lines.append(",".join(cells))
    if traj.truncated:
        lines.append(f"# truncated at t={_g17(traj.truncated_at)}")
    return "\n".join(lines) + "\n"


def stability_csv(m: VectorFieldModel, result: EquilibriaResult) -> str:
    """Stability table: one row per equilibrium, diagnostics as comments."""
    header = (
        ["support"]
        + [f"x{i + 1}" for i in range(m.n)]
        + ["lyapunov", "max_re_jacobian", "jacobi", "max_re_deviation"]
    )
    lines = [",".join(header)]
    for eq in result.equilibria:
        cells = [support_label(eq.support)]
        cells += [repr(float(v)) for v in eq.x]
        cells += [
            eq.lyapunov,
            repr(float(eq.max_re_jacobian)),
            eq.jacobi,
            repr(float(eq.max_re_deviation)),
        ]
        lines.append(",".join(cells))
    for note in result.skipped:
        lines.append(f"# skipped {note}")
    return "\n".join(lines) + "\n"
