from __future__ import annotations

import numpy as np
from conftest import positive_open, random_lv

from kccflow.hamilton import (
    hamilton_connection,
    hamilton_flow_velocity,
    hamilton_torsions,
    hamiltonian,
    legendre_momenta,
)
from kccflow.lagrange import d_torsions, lagrangian
from kccflow.vectorfield import custom_field, field_value, jacobian


def test_hamiltonian_zero_momentum(s1, rng):
    for _ in range(5):
        x = positive_open(rng, 5.0, 3)
        assert hamiltonian(s1, x, np.zeros(3)) == 0.0


def test_hamiltonian_zero_field(zero_field):
    assert hamiltonian(zero_field, [0.0, 0.0, 0.0], [2.0, 0.0, 0.0]) == 1.0


def test_hamiltonian_s2(s2):
    assert hamiltonian(s2, [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]) == -5.25


def test_momenta_vanish_on_flow(rng):
    for _ in range(10):
        m = random_lv(rng)
        x = positive_open(rng, 5.0, 3)
        assert np.array_equal(legendre_momenta(m, x, field_value(m, x)), np.zeros(3))


def test_momenta_zero_field(zero_field):
    p = legendre_momenta(zero_field, [9.0, 9.0, 9.0], [1.0, 2.0, 3.0])
    assert np.array_equal(p, [2.0, 4.0, 6.0])
    y = np.array([1.0, 2.0, 3.0])
    assert hamiltonian(zero_field, [9.0, 9.0, 9.0], p) == 14.0
    assert p @ y - lagrangian(zero_field, [9.0, 9.0, 9.0], y) == 14.0


def test_momenta_s2_at_rest(s2):
    assert np.array_equal(legendre_momenta(s2, [1.0, 1.0, 1.0], np.zeros(3)), [4.0, 4.0, 4.0])


def test_legendre_round_trip(rng):
    worst = 0.0
    for _ in range(100):
        m = random_lv(rng, hi=2.0)
        x = positive_open(rng, 1.0, 3)
        y = positive_open(rng, 1.0, 3)
        p = legendre_momenta(m, x, y)
        worst = max(worst, abs(hamiltonian(m, x, p) - (p @ y - lagrangian(m, x, y))))
    assert worst < 1e-12


def test_connection_s3(s3):
    N = hamilton_connection(s3, [1.0, 1.0, 1.0])
    expected = np.array([[-12.0, -6.0, -10.0], [-6.0, -36.0, -14.0], [-10.0, -14.0, -64.0]])
    assert np.array_equal(N, expected)


def test_connection_zero_field(zero_field):
    assert np.array_equal(hamilton_connection(zero_field, [1.0, 2.0, 3.0]), np.zeros((3, 3)))


def test_connection_doubles_symmetric_jacobian(s2):
    x = [1.0, 1.0, 1.0]
    assert np.array_equal(hamilton_connection(s2, x), 2.0 * jacobian(s2, x))


def test_connection_exactly_symmetric_and_equals_j_plus_jt(rng):
    for _ in range(20):
        m = random_lv(rng)
        x = positive_open(rng, 5.0, 3)
        N = hamilton_connection(m, x)
        assert np.array_equal(N, N.T)
        J = jacobian(m, x)
        assert np.max(np.abs(N - (J + J.T))) < 1e-12


def test_connection_matches_mixed_fd_of_hamiltonian(rng):
    # N_ij = d2H/dx^j dp_i + d2H/dx^i dp_j by central differences
    h = 1e-4
    worst = 0.0
    for _ in range(30):
        m = random_lv(rng, hi=2.0)
        x = positive_open(rng, 1.0, 3)
        p = positive_open(rng, 1.0, 3)
        N = hamilton_connection(m, x)

        def mixed(i, j):
            ei = np.zeros(3)
            ej = np.zeros(3)
            ei[i] = h
            ej[j] = h
            return (
                hamiltonian(m, x + ej, p + ei)
                - hamiltonian(m, x + ej, p - ei)
                - hamiltonian(m, x - ej, p + ei)
                + hamiltonian(m, x - ej, p - ei)
            ) / (4.0 * h * h)

        fd = np.array([[mixed(i, j) + mixed(j, i) for j in range(3)] for i in range(3)])
        worst = max(worst, np.max(np.abs(N - fd)))
    assert worst < 1e-5


def test_torsions_s3_and_minus_two_identity(s3):
    R_h = hamilton_torsions(s3, [1.0, 1.0, 1.0])
    assert np.array_equal(R_h[0], [[0.0, -2.0, -3.0], [2.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
    R = d_torsions(s3, [1.0, 1.0, 1.0])
    for k in range(3):
        assert np.array_equal(R_h[k], -2.0 * R[k])


def test_torsions_zero_field(zero_field):
    for R in hamilton_torsions(zero_field, [1.0, 1.0, 1.0]):
        assert np.array_equal(R, np.zeros((3, 3)))


def test_torsions_constant_for_lv(s1):
    r1 = hamilton_torsions(s1, [1.0, 1.0, 1.0])
    r2 = hamilton_torsions(s1, [2.0, 3.0, 5.0])
    for k in range(3):
        assert np.array_equal(r1[k], r2[k])


def test_minus_two_identity_exact_on_random_models(rng):
    for _ in range(20):
        m = random_lv(rng)
        x = positive_open(rng, 5.0, 3)
        R = d_torsions(m, x)
        R_h = hamilton_torsions(m, x)
        for k in range(3):
            assert np.array_equal(R_h[k], -2.0 * R[k])
            assert np.array_equal(R_h[k], -R_h[k].T)


def test_torsions_defining_formula_for_custom_field(rng):
    # for a non-competition field, check the defining combination of
    # connection derivatives by finite differences
    m = custom_field(["x1^2*x2", "x2*x3 - x1", "x3^2"])
    x = np.array([0.7, 1.3, 0.4])
    h = 1e-5
    R_h = hamilton_torsions(m, x)
    dN = []
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        dN.append((hamilton_connection(m, x + e) - hamilton_connection(m, x - e)) / (2.0 * h))
    for k in range(3):
        fd = np.zeros((3, 3))
        for i in range(3):
            for j in range(3):
                fd[i, j] = dN[j][k, i] - dN[i][k, j]
        assert np.max(np.abs(R_h[k] - fd)) < 1e-6


def test_flow_velocity_consistency(rng):
    for _ in range(10):
        m = random_lv(rng)
        x = positive_open(rng, 5.0, 3)
        p = legendre_momenta(m, x, field_value(m, x))
        assert np.max(np.abs(hamilton_flow_velocity(m, x, p) - field_value(m, x))) < 1e-12
