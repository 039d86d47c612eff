import numpy as np
import pytest

from corruptmatch.rng import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20260810)
