"""Shared pytest fixtures."""
import os

# Every operator built in the tests passes the firm-nonexpansiveness guard
os.environ.setdefault("DUALITY_VALIDATE_OPERATORS", "true")

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(1234))


@pytest.fixture
def points(rng):
    def draw(n, dim):
        return rng.normal(scale=10.0, size=(n, dim))

    return draw
