import numpy as np
import pytest
from hypothesis import strategies as st

from bakersim.bitstring import BitString


def bitstrings(min_size=0, max_size=20):
    return st.lists(st.integers(0, 1), min_size=min_size, max_size=max_size).map(
        lambda bits: BitString(tuple(bits))
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
