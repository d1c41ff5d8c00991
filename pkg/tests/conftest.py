import numpy as np
import pytest

from sphmult.space import Exponent, ProductSpace, RankOneSpace


@pytest.fixture(scope="session")
def H2():
    return RankOneSpace(1, 0)


@pytest.fixture(scope="session")
def H3():
    return RankOneSpace(2, 0)


@pytest.fixture(scope="session")
def CH2():
    return RankOneSpace(2, 1)


@pytest.fixture(scope="session")
def H2xH2(H2):
    return ProductSpace(H2, H2)


@pytest.fixture(scope="session")
def p43():
    return Exponent(4.0 / 3.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)
