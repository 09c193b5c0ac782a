"""Parameter sweeps over competition-model coefficients.

A sweep varies one or two coefficients on a grid and records, per cell,
whether the interior equilibrium (all species present) exists and how
it classifies.  Cells are independent, so they may be evaluated by a
thread pool; rows are always emitted in lexicographic grid order, which
makes the output identical with and without concurrency.

Coefficient paths: ``a.i.j`` addresses a_ij, ``b.i`` addresses b_i,
with 1-based indices.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kcc import jacobi_classify
from .linalg import (
    SingularMatrixError,
    eigenvalues,
    norm_inf,
    solve_linear,
    spectral_verdict,
)
from .vectorfield import VectorFieldModel, jacobian, lotka_volterra


@dataclass(frozen=True)
class SweepAxis:
    path: str
    values: tuple[float, ...]


def parse_param_path(path: str, n: int) -> tuple:
    parts = path.split(".")
    try:
        if len(parts) == 3 and parts[0] == "a":
            i, j = int(parts[1]), int(parts[2])
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError
            return ("a", i - 1, j - 1)
        if len(parts) == 2 and parts[0] == "b":
            i = int(parts[1])
            if not (1 <= i <= n):
                raise ValueError
            return ("b", i - 1)
    except ValueError:
        pass
    raise ValueError(f"bad coefficient path {path!r}; expected a.i.j or b.i with indices in [1, {n}]")


def axis_values(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Grid lo, lo+step, ... up to hi inclusive (within rounding slack)."""
    if step <= 0.0:
        raise ValueError("sweep step must be positive")
    if hi < lo:
        raise ValueError("sweep range must have hi >= lo")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(lo + k * step for k in range(count))


def make_axis(path: str, lo: float, hi: float, step: float, n: int) -> SweepAxis:
    parse_param_path(path, n)  # validate early
    values = axis_values(lo, hi, step)
    if any(v <= 0.0 for v in values):
        raise ValueError(f"swept values for {path} must stay strictly positive")
    return SweepAxis(path, values)


def _with_coefficient(a: list[list[float]], b: list[float], target: tuple, value: float):
    if target[0] == "a":
        a[target[1]][target[2]] = value
    else:
        b[target[1]] = value


def _evaluate_cell(
    base_a: Sequence[Sequence[float]],
    base_b: Sequence[float],
    targets: list[tuple],
    values: tuple[float, ...],
) -> list[str]:
    a = [list(row) for row in base_a]
    b = list(base_b)
    for target, value in zip(targets, values):
        _with_coefficient(a, b, target, value)
    cell = [repr(float(v)) for v in values]
    n = len(b)
    try:
        x = solve_linear(a, b)
    except SingularMatrixError:
        return cell + ["degenerate"] + [""] * n + ["", ""]
    if not np.all(x > 0.0):
        return cell + ["no"] + [""] * n + ["", ""]
    model = lotka_volterra(a, b)
    J = jacobian(model, x)
    lyap = spectral_verdict(eigenvalues(J), 1e-9 * norm_inf(J))
    report = jacobi_classify(model, x, np.zeros(n))
    return cell + ["yes"] + [repr(float(v)) for v in x] + [lyap, report.verdict]


def sweep_stability(m: VectorFieldModel, axes: Sequence[SweepAxis], workers: int = 1) -> str:
    """CSV grid of interior-equilibrium existence and verdicts."""
    if m.kind != "lotka_volterra":
        raise ValueError("sweeps require a lotka_volterra system")
    if not 1 <= len(axes) <= 2:
        raise ValueError("sweeps take one or two axes")
    if workers < 1:
        raise ValueError("worker count must be at least 1")
    targets = [parse_param_path(ax.path, m.n) for ax in axes]
    for ax in axes:
        if any(v <= 0.0 for v in ax.values):
            raise ValueError(f"swept values for {ax.path} must stay strictly positive")

    if len(axes) == 1:
        cells = [(v,) for v in axes[0].values]
    else:
        cells = [(v1, v2) for v1 in axes[0].values for v2 in axes[1].values]

    def run(values: tuple[float, ...]) -> list[str]:
        return _evaluate_cell(m.a, m.b, targets, values)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(c) for c in cells]

    header = [ax.path for ax in axes]
    header += ["interior"] + [f"x{i + 1}" for i in range(m.n)] + ["lyapunov", "jacobi"]
    lines = [",".join(header)] + [",".join(row) for row in rows]
    return "\n".join(lines) + "\n"
