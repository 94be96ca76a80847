import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from projcong.bodies import Polytope, SupportSeries, constant_width_harmonic, random_polytope
from projcong.geometry import fibonacci_grid

CUBE_VERTICES = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))


def seeded_polytope(seed: int, m: int = 30) -> Polytope:
    return random_polytope(m, np.random.Generator(np.random.PCG64(seed)))


def unit_vectors(min_norm=0.1):
    """Hypothesis strategy for unit 3-vectors (normalized non-tiny float triples)."""
    coords = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
    return (
        st.tuples(coords, coords, coords)
        .map(np.array)
        .filter(lambda v: np.linalg.norm(v) > min_norm)
        .map(lambda v: v / np.linalg.norm(v))
    )


@pytest.fixture(scope="session")
def cube():
    return Polytope(CUBE_VERTICES)


@pytest.fixture(scope="session")
def ball2():
    return SupportSeries.ball(2.0)


@pytest.fixture(scope="session")
def cw_body():
    return constant_width_harmonic(0.05)


@pytest.fixture(scope="session")
def K():
    return seeded_polytope(7)


@pytest.fixture(scope="session")
def grid812():
    return fibonacci_grid(406, antipodal=True)
