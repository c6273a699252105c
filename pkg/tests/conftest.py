import random

import pytest

from kquant.config import Settings
from kquant.polyvector import PolyVectorField


@pytest.fixture()
def rng():
    return random.Random(20240607)


@pytest.fixture()
def settings():
    return Settings(threads=2, chunk_size=4096)


@pytest.fixture()
def so3():
    return PolyVectorField.so3()


@pytest.fixture()
def symplectic():
    return PolyVectorField.standard_symplectic(1)
