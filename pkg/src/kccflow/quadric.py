"""Constant-level surfaces of the field energy for 3-species models.

For the competition model the energy is the quadratic form

    EYM(x) = 1/4 [ (a12 x1 - a21 x2)^2 + (a13 x1 - a31 x3)^2
                   + (a23 x2 - a32 x3)^2 ]  =  1/4 x^T M x,

with M = C^T C for the coefficient matrix

    C = [[a12, -a21,    0],
         [a13,    0, -a31],
         [  0,  a23, -a32]].

The level set EYM = rho is a central quadric classified by the rank of
M: an ellipsoid (rank 3, i.e. a12 a23 a31 != a13 a21 a32), an elliptic
cylinder (rank 2), or a lower-rank degenerate set.  Strictly positive
coefficients force rank >= 2, so the degenerate class only arises for
synthetic forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .vectorfield import VectorFieldModel

RANK_RTOL = 1e-9


class QuadricError(ValueError):
    pass


@dataclass(frozen=True)
class QuadricSurface:
    form: np.ndarray  # symmetric PSD matrix M
    spectrum: np.ndarray  # eigenvalues of M, ascending
    axes: np.ndarray  # orthonormal eigenvectors, columns matching spectrum
    rank: int
    classification: str  # ellipsoid | elliptic_cylinder | lower_rank_degenerate


@dataclass(frozen=True)
class SurfaceMesh:
    level: float
    vertices: np.ndarray  # (count, 3)
    faces: tuple[tuple[int, int, int, int], ...]  # quads, 1-based vertex indices


def quadric_from_form(M: np.ndarray) -> QuadricSurface:
    """Classify a symmetric PSD form by its numerical rank."""
    M = np.asarray(M, dtype=float)
    vals, vecs = np.linalg.eigh(M)
    # fix eigenvector signs so repeated runs emit identical meshes
    for c in range(vecs.shape[1]):
        lead = int(np.argmax(np.abs(vecs[:, c])))
        if vecs[lead, c] < 0.0:
            vecs[:, c] = -vecs[:, c]
    top = float(vals[-1])
    if top <= 0.0:
        rank = 0
    else:
        rank = int(np.sum(vals > RANK_RTOL * top))
    if rank == 3:
        classification = "ellipsoid"
    elif rank == 2:
        classification = "elliptic_cylinder"
    else:
        classification = "lower_rank_degenerate"
    return QuadricSurface(M, vals, vecs, rank, classification)


def energy_quadratic_form(m: VectorFieldModel) -> QuadricSurface:
    """Quadratic form of the field energy for a 3-species competition model."""
    if m.kind != "lotka_volterra":
        raise QuadricError("energy quadric requires a lotka_volterra system")
    if m.n != 3:
        raise QuadricError("energy quadric is defined for dimension 3")
    a = m.a
    C = np.array(
        [
            [a[0][1], -a[1][0], 0.0],
            [a[0][2], 0.0, -a[2][0]],
            [0.0, a[1][2], -a[2][1]],
        ]
    )
    M = C.T @ C
    for i in range(3):  # mirror so the form is bitwise symmetric
        for j in range(i + 1, 3):
            M[j, i] = M[i, j]
    return quadric_from_form(M)


def level_value(q: QuadricSurface, x) -> float:
    """Energy at a point: 1/4 x^T M x."""
    xv = np.asarray(x, dtype=float)
    return float(0.25 * (xv @ q.form @ xv))


def _grid_faces(rows: int, cols: int) -> tuple[tuple[int, int, int, int], ...]:
    # quads between consecutive rows, wrapping in the column direction
    faces = []
    for i in range(rows - 1):
        for j in range(cols):
            a = i * cols + j + 1
            b = (i + 1) * cols + j + 1
            c = (i + 1) * cols + (j + 1) % cols + 1
            d = i * cols + (j + 1) % cols + 1
            faces.append((a, b, c, d))
    return tuple(faces)


def sample_surface(
    q: QuadricSurface, rho: float, resolution: int, axial_extent: float = 10.0
) -> SurfaceMesh:
    """Sample the level set EYM = rho on a resolution x resolution grid.

    Ellipsoids map a spherical grid through the eigen-decomposition;
    cylinders sweep the elliptic cross-section along the null axis over
    [-axial_extent, axial_extent].  rho = 0 collapses to the origin.
    A degenerate form with rho > 0 has an unbounded level set and is
    rejected.
    """
    if rho < 0.0:
        raise QuadricError("level must be nonnegative")
    if resolution < 8:
        raise QuadricError("resolution must be at least 8")
    if axial_extent <= 0.0:
        raise QuadricError("axial extent must be positive")
    if rho == 0.0:
        return SurfaceMesh(0.0, np.zeros((1, 3)), ())
    if q.classification == "lower_rank_degenerate":
        raise QuadricError("degenerate level set is unbounded and cannot be meshed")

    res = int(resolution)
    verts = np.zeros((res * res, 3))
    if q.classification == "ellipsoid":
        radii = np.sqrt(4.0 * rho / q.spectrum)
        for i in range(res):
            theta = math.pi * (i + 0.5) / res  # offset grid keeps poles simple
            for j in range(res):
                phi = 2.0 * math.pi * j / res
                unit = np.array(
                    [
                        math.sin(theta) * math.cos(phi),
                        math.sin(theta) * math.sin(phi),
                        math.cos(theta),
                    ]
                )
                verts[i * res + j] = q.axes @ (radii * unit)
    else:  # elliptic cylinder: spectrum[0] is the null direction
        axis = q.axes[:, 0]
        u1, u2 = q.axes[:, 1], q.axes[:, 2]
        r1 = math.sqrt(4.0 * rho / q.spectrum[1])
        r2 = math.sqrt(4.0 * rho / q.spectrum[2])
        for i in range(res):
            t = -axial_extent + 2.0 * axial_extent * i / (res - 1)
            for j in range(res):
                phi = 2.0 * math.pi * j / res
                verts[i * res + j] = r1 * math.cos(phi) * u1 + r2 * math.sin(phi) * u2 + t * axis
    return SurfaceMesh(float(rho), verts, _grid_faces(res, res))


def mesh_to_obj(mesh: SurfaceMesh) -> str:
    lines = [f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}" for v in mesh.vertices]
    lines += [f"f {a} {b} {c} {d}" for a, b, c, d in mesh.faces]
    return "\n".join(lines) + "\n"


def mesh_to_csv(mesh: SurfaceMesh) -> str:
    lines = ["x1,x2,x3"]
    lines += [f"{float(v[0])!r},{float(v[1])!r},{float(v[2])!r}" for v in mesh.vertices]
    return "\n".join(lines) + "\n"
