import math

import numpy as np
import pytest

from catlab.fock import SpaceConfig
from catlab.model import ModelParams

HALF_PI = math.pi / 2


def coherent_series(alpha: complex, dim: int) -> np.ndarray:
    """Unnormalized-truncation coherent amplitudes straight from the factorial series."""
    return np.array(
        [math.exp(-abs(alpha) ** 2 / 2) * alpha**n / math.sqrt(math.factorial(n)) for n in range(dim)],
        dtype=complex,
    )


@pytest.fixture
def eta2():
    return ModelParams(eta=2.0)


@pytest.fixture
def cfg64():
    return SpaceConfig(64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
