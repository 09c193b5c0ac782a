from __future__ import annotations

import numpy as np
import pytest
from conftest import positive_open, random_lv

from kccflow.lagrange import yang_mills_energy
from kccflow.quadric import (
    QuadricError,
    energy_quadratic_form,
    level_value,
    mesh_to_csv,
    mesh_to_obj,
    quadric_from_form,
    sample_surface,
)
from kccflow.vectorfield import lotka_volterra


def test_classification_s3_ellipsoid(s3):
    # a12 a23 a31 - a13 a21 a32 = 84 - 96 = -12, so full rank
    q = energy_quadratic_form(s3)
    assert q.classification == "ellipsoid"
    assert q.rank == 3


def test_classification_s2_cylinder_axis(s2):
    q = energy_quadratic_form(s2)
    assert q.classification == "elliptic_cylinder"
    assert q.rank == 2
    axis = q.axes[:, 0]
    diag = np.full(3, 1.0 / np.sqrt(3.0))
    assert abs(abs(axis @ diag) - 1.0) < 1e-12


def test_form_matches_energy(rng):
    for _ in range(20):
        m = random_lv(rng)
        q = energy_quadratic_form(m)
        for _ in range(5):
            x = positive_open(rng, 5.0, 3)
            e = yang_mills_energy(m, x)
            assert level_value(q, x) == pytest.approx(e, rel=1e-12, abs=1e-15)


def test_form_is_symmetric_psd(rng):
    for _ in range(20):
        q = energy_quadratic_form(random_lv(rng))
        assert np.array_equal(q.form, q.form.T)
        assert np.min(q.spectrum) > -1e-9 * max(np.max(q.spectrum), 1.0)
        assert q.rank >= 2  # strict positivity forces at least rank 2


def test_classification_follows_coupling_determinant(rng):
    for _ in range(20):
        m = random_lv(rng)
        a = np.array(m.a)
        det = a[0, 1] * a[1, 2] * a[2, 0] - a[0, 2] * a[1, 0] * a[2, 1]
        q = energy_quadratic_form(m)
        if abs(det) > 1e-6:
            assert q.classification == "ellipsoid"


def test_rejects_wrong_models(zero_field):
    with pytest.raises(QuadricError):
        energy_quadratic_form(zero_field)
    m4 = lotka_volterra(np.ones((4, 4)), np.ones(4))
    with pytest.raises(QuadricError):
        energy_quadratic_form(m4)


def test_point_on_s2_level_surface(s2):
    q = energy_quadratic_form(s2)
    assert level_value(q, [1.0, 2.0, 0.0]) == 1.5


def test_sample_ellipsoid_membership(s3):
    q = energy_quadratic_form(s3)
    mesh = sample_surface(q, 1.0, 16)
    assert mesh.vertices.shape == (256, 3)
    for v in mesh.vertices:
        assert abs(level_value(q, v) - 1.0) <= 1e-9 * 2.0
    assert len(mesh.faces) == 16 * 15


def test_sample_cylinder_membership(s2):
    q = energy_quadratic_form(s2)
    mesh = sample_surface(q, 1.5, 12, axial_extent=4.0)
    assert mesh.vertices.shape == (144, 3)
    for v in mesh.vertices:
        assert abs(level_value(q, v) - 1.5) <= 1e-9 * 2.5
    # axial span reaches the requested extent along the null direction
    along = mesh.vertices @ q.axes[:, 0]
    assert along.max() == pytest.approx(4.0, rel=1e-12)
    assert along.min() == pytest.approx(-4.0, rel=1e-12)


def test_sample_zero_level_is_origin(s3):
    mesh = sample_surface(energy_quadratic_form(s3), 0.0, 16)
    assert np.array_equal(mesh.vertices, np.zeros((1, 3)))
    assert mesh.faces == ()


def test_degenerate_form_rejected_for_positive_level():
    q = quadric_from_form(np.diag([1.0, 0.0, 0.0]))
    assert q.classification == "lower_rank_degenerate"
    with pytest.raises(QuadricError, match="unbounded"):
        sample_surface(q, 1.0, 16)
    mesh = sample_surface(q, 0.0, 16)
    assert mesh.vertices.shape == (1, 3)


def test_sample_validation(s3):
    q = energy_quadratic_form(s3)
    with pytest.raises(QuadricError):
        sample_surface(q, -1.0, 16)
    with pytest.raises(QuadricError):
        sample_surface(q, 1.0, 4)
    with pytest.raises(QuadricError):
        sample_surface(q, 1.0, 16, axial_extent=0.0)


def test_obj_export(s3):
    q = energy_quadratic_form(s3)
    mesh = sample_surface(q, 1.0, 8)
    text = mesh_to_obj(mesh)
    lines = text.strip().split("\n")
    v_lines = [l for l in lines if l.startswith("v ")]
    f_lines = [l for l in lines if l.startswith("f ")]
    assert len(v_lines) == 64
    assert len(f_lines) == 8 * 7
    # 1-based quad indices within range
    for line in f_lines:
        idx = [int(tok) for tok in line.split()[1:]]
        assert len(idx) == 4
        assert all(1 <= i <= 64 for i in idx)
    # vertices restored from text still satisfy the level equation
    first = [float(tok) for tok in v_lines[0].split()[1:]]
    assert abs(level_value(q, first) - 1.0) <= 1e-9 * 2.0


def test_csv_export(s2):
    q = energy_quadratic_form(s2)
    mesh = sample_surface(q, 1.5, 8)
    text = mesh_to_csv(mesh)
    lines = text.strip().split("\n")
    assert lines[0] == "x1,x2,x3"
    assert len(lines) == 65
