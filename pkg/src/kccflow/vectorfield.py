"""Vector-field models: components plus cached exact derivative trees.

A model holds the component expressions X^i together with every first
derivative dX^i/dx^j and second derivative d2X^i/dx^j dx^k as symbolic
trees, so Jacobians and component Hessians are exact (no numerical
differentiation anywhere in the geometry).

Index convention: component and variable indices in the public API are
1-based, matching the expression syntax x1..xn; array storage is the
usual 0-based numpy layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .expressions import Expr, differentiate, evaluate, parse_expression, to_string

# Off-diagonal Jacobian entries of the competition model are
# d/dx_j [x_i (b_i - sum_k a_ik x_k)] = -a_ij x_i; every derived matrix
# (connections, torsions, deviation curvature) inherits these signs.
SIGN_CONVENTION = (
    "Jacobian entries are the exact partial derivatives of the field "
    "components; for the competition model the off-diagonal entries are "
    "-a_ij*x_i and the derived connection/torsion matrices inherit these signs."
)


class ModelError(ValueError):
    """Invalid model definition (coefficients, dimensions, file format)."""


@dataclass(frozen=True)
class VectorFieldModel:
    n: int
    kind: str  # "lotka_volterra" | "custom"
    components: tuple[Expr, ...]
    first_derivs: tuple[tuple[Expr, ...], ...]
    second_derivs: tuple[tuple[tuple[Expr, ...], ...], ...]
    a: tuple[tuple[float, ...], ...] | None = None
    b: tuple[float, ...] | None = None


def _derivative_tables(components: Sequence[Expr], n: int):
    first = tuple(tuple(differentiate(c, j + 1) for j in range(n)) for c in components)
    second = tuple(
        tuple(tuple(differentiate(first[i][j], k + 1) for k in range(n)) for j in range(n))
        for i in range(n)
    )
    return first, second


def lotka_volterra(a: Sequence[Sequence[float]], b: Sequence[float]) -> VectorFieldModel:
    """Competition model x_i' = x_i (b_i - sum_j a_ij x_j), all coefficients > 0."""
    bv = tuple(float(v) for v in b)
    n = len(bv)
    if n < 2:
        raise ModelError("dimension must be at least 2")
    if len(a) != n or any(len(row) != n for row in a):
        raise ModelError(f"coefficient matrix must be {n}x{n} to match b")
    av = tuple(tuple(float(v) for v in row) for row in a)
    if any(v <= 0.0 for row in av for v in row) or any(v <= 0.0 for v in bv):
        raise ModelError("all coefficients a_ij and b_i must be strictly positive")

    from .expressions import Const, Mul, Sub, Var

    comps = []
    for i in range(n):
        growth: Expr = Const(bv[i])
        for j in range(n):
            growth = Sub(growth, Mul(Const(av[i][j]), Var(j + 1)))
        comps.append(Mul(Var(i + 1), growth))
    first, second = _derivative_tables(comps, n)
    return VectorFieldModel(n, "lotka_volterra", tuple(comps), first, second, av, bv)


def custom_field(components: Sequence[str], dimension: int | None = None) -> VectorFieldModel:
    """Model from component expression strings, one per coordinate."""
    n = len(components) if dimension is None else int(dimension)
    if n < 2:
        raise ModelError("dimension must be at least 2")
    if len(components) != n:
        raise ModelError(f"expected {n} component expressions, got {len(components)}")
    comps = tuple(parse_expression(text, n) for text in components)
    first, second = _derivative_tables(comps, n)
    return VectorFieldModel(n, "custom", comps, first, second)


def load_system(spec: Mapping) -> VectorFieldModel:
    """Build a model from a system-definition mapping.

    Two forms are accepted::

        {"type": "lotka_volterra", "a": [[...], ...], "b": [...]}
        {"type": "custom", "dimension": n, "components": ["...", ...]}
    """
    if not isinstance(spec, Mapping):
        raise ModelError("system definition must be a JSON object")
    kind = spec.get("type")
    if kind == "lotka_volterra":
        if "a" not in spec or "b" not in spec:
            raise ModelError("lotka_volterra system needs fields 'a' and 'b'")
        return lotka_volterra(spec["a"], spec["b"])
    if kind == "custom":
        if "dimension" not in spec or "components" not in spec:
            raise ModelError("custom system needs fields 'dimension' and 'components'")
        return custom_field(spec["components"], spec["dimension"])
    raise ModelError(f"unknown system type: {kind!r}")


def system_definition(m: VectorFieldModel) -> dict:
    """Canonical definition mapping for a model (echoed in reports)."""
    if m.kind == "lotka_volterra":
        return {"type": "lotka_volterra", "a": [list(row) for row in m.a], "b": list(m.b)}
    return {
        "type": "custom",
        "dimension": m.n,
        "components": [to_string(c) for c in m.components],
    }


def _check_point(m: VectorFieldModel, x: Sequence[float]) -> np.ndarray:
    xv = np.asarray(x, dtype=float)
    if xv.shape != (m.n,):
        raise ValueError(f"point must have dimension {m.n}")
    return xv


def field_value(m: VectorFieldModel, x: Sequence[float]) -> np.ndarray:
    xv = _check_point(m, x)
    return np.array([evaluate(c, xv) for c in m.components])


def jacobian(m: VectorFieldModel, x: Sequence[float]) -> np.ndarray:
    """J[i, j] = dX^i/dx^j evaluated at x."""
    xv = _check_point(m, x)
    return np.array([[evaluate(d, xv) for d in row] for row in m.first_derivs])


def hessian_component(m: VectorFieldModel, i: int, x: Sequence[float]) -> np.ndarray:
    """H[j, k] = d2X^i/dx^j dx^k at x (i is 1-based), bitwise symmetric.

    The (j, k) and (k, j) trees evaluate identically but not always to
    the same float, so the upper triangle is mirrored.
    """
    if i < 1 or i > m.n:
        raise ValueError(f"component index must be in [1, {m.n}]")
    xv = _check_point(m, x)
    table = m.second_derivs[i - 1]
    h = np.zeros((m.n, m.n))
    for j in range(m.n):
        for k in range(j, m.n):
            v = evaluate(table[j][k], xv)
            h[j, k] = v
            h[k, j] = v
    return h


def hessian_stack(m: VectorFieldModel, x: Sequence[float]) -> np.ndarray:
    """W[i, j, k] = d2X^(i+1)/dx^j dx^k, all components at once."""
    return np.stack([hessian_component(m, i + 1, x) for i in range(m.n)])
