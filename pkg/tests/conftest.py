import pytest

from ultralab.core import pquotient
from ultralab.prng import XorShift64Star


@pytest.fixture
def z9():
    return pquotient(3, 2)


@pytest.fixture
def rng():
    return XorShift64Star(12345)
