import numpy as np
import pytest

from fracspec import EvalConfig, make_cantor_string


@pytest.fixture(scope="session")
def cfg():
    return EvalConfig()


@pytest.fixture(scope="session")
def cantor40():
    return make_cantor_string(40)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
