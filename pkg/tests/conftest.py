import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bjclass.blockalg import Algebra, random_element

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# a spread of block shapes over both fields, small enough for property tests
SMALL_ALGEBRAS = [
    "field=R; R + R",
    "field=R; C + H",
    "field=R; R + M2(R)",
    "field=R; H + M2(C)",
    "field=R; M2(H)",
    "field=R; C + M3(R)",
    "field=C; C + C + C",
    "field=C; C + M2(C)",
    "field=C; M3(C)",
]

algebras = st.sampled_from(SMALL_ALGEBRAS).map(Algebra.parse)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
laws = st.sampled_from(["gaussian", "sparse", "single", "left", "unitary", "tied", "degenerate",
                        "rank_one", "zero"])


@st.composite
def elements(draw, law=None):
    alg = draw(algebras)
    return random_element(alg, draw(seeds), law or draw(laws))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
