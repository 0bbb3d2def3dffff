import numpy as np
import pytest

from qlct.grid import GridSpec2D
from qlct.quaternion import MU, NU
from qlct.transform import ParamMatrix, TransformSpec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def grid16():
    return GridSpec2D(16, 16, 0.5, 0.5)


@pytest.fixture
def same_spec():
    return TransformSpec(ParamMatrix(1, 2, 0, 1), ParamMatrix(0.5, 1, -0.5, 1), MU, MU)


@pytest.fixture
def orth_spec():
    return TransformSpec(ParamMatrix(1, 2, 0, 1), ParamMatrix(0, 1, -1, 0), MU, NU)


def random_param(rng):
    """Unit-determinant matrix with |b| in [0.5, 4]."""
    b = rng.uniform(0.5, 4) * rng.choice([-1, 1])
    a, d = rng.uniform(-2, 2, size=2)
    return ParamMatrix(a, b, (a * d - 1) / b, d)
