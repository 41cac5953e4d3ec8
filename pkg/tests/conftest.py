import numpy as np
import pytest

from crisscross import codec, gabidulin


@pytest.fixture(scope="session")
def code64():
    p = codec.make_params(64, 1)
    return p, gabidulin.build(64, 1)


@pytest.fixture(scope="session")
def code128():
    p = codec.make_params(128, 2)
    return p, gabidulin.build(128, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
