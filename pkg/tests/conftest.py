import numpy as np
import pytest

from cauchygof import Sample, dax_returns

#: worker count used by the heavier simulations; results are worker-invariant
WORKERS = 2


@pytest.fixture(scope="session")
def dax() -> Sample:
    return dax_returns()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
