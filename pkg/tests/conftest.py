import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ratmap.gca import Elem, FreeAlgebra

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")


@st.composite
def free_algebras(draw, max_gens=4, max_degree=6):
    degs = draw(st.lists(st.integers(1, max_degree), min_size=1, max_size=max_gens))
    return FreeAlgebra([(f"g{i}", d) for i, d in enumerate(degs)])


@st.composite
def homogeneous(draw, ring: FreeAlgebra, degree: int):
    basis = ring.basis(degree)
    if not basis:
        return ring.zero()
    picks = draw(st.lists(st.sampled_from(basis), max_size=4))
    terms = {}
    for m in picks:
        terms[m] = terms.get(m, 0) + draw(st.integers(-3, 3))
    return Elem(ring, {m: c for m, c in terms.items() if c})


seeds = st.integers(0, 10 ** 6)


@pytest.fixture
def rng():
    return random.Random(1234)
