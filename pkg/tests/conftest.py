from __future__ import annotations

import numpy as np
import pytest

from kccflow.vectorfield import custom_field, lotka_volterra

# reference systems used throughout the suite:
#   S1: interior equilibrium (1,1,1) with symmetric Jacobian there
#   S2: rank-deficient energy quadric (all couplings equal)
#   S3: fully asymmetric coefficients
S1_A = [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]
S1_B = [4.0, 4.0, 4.0]
S2_A = [[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]]
S2_B = [1.0, 1.0, 1.0]
S3_A = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]]
S3_B = [1.0, 2.0, 3.0]


@pytest.fixture
def s1():
    return lotka_volterra(S1_A, S1_B)


@pytest.fixture
def s2():
    return lotka_volterra(S2_A, S2_B)


@pytest.fixture
def s3():
    return lotka_volterra(S3_A, S3_B)


@pytest.fixture
def zero_field():
    return custom_field(["0", "0", "0"])


@pytest.fixture
def rng():
    return np.random.default_rng(20250809)


def positive_open(rng: np.random.Generator, hi: float, shape) -> np.ndarray:
    """Uniform draw from the half-open interval (0, hi]."""
    return hi * (1.0 - rng.random(shape))


def random_lv(rng: np.random.Generator, hi: float = 10.0, n: int = 3):
    return lotka_volterra(positive_open(rng, hi, (n, n)), positive_open(rng, hi, n))
