"""Shared helpers for the test suite.

Random objects are always drawn from an explicitly seeded Generator so every
test is reproducible; tests that sweep many instances derive one rng per
sweep and never reseed inside the loop.
"""

import numpy as np
import pytest

from splitlab.operators import haar_unitary


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    r = rank if rank is not None else dim
    g = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return haar_unitary(dim, rng)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)
