import numpy as np
import pytest

from swstab import presets
from swstab.model import SubSystem, SwitchedSystem


@pytest.fixture
def example1():
    return presets.example_1()


@pytest.fixture
def example2():
    return presets.example_2()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_stable_pair(rng, n=2):
    """Two random matrices whose mean is stable (for synthesis tests)."""
    while True:
        A = rng.normal(size=(n, n))
        B = rng.normal(size=(n, n))
        if np.max(np.linalg.eigvals(0.5 * (A + B)).real) < -0.1:
            return A, B


def random_switched_system(rng, n, m, affine=False):
    subs = []
    for _ in range(m):
        A = rng.normal(size=(n, n))
        b = rng.normal(size=n) if affine else np.zeros(n)
        subs.append(SubSystem(A, b))
    return SwitchedSystem(tuple(subs))
