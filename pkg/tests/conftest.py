import pytest

from eurbounds import quantum as Q


@pytest.fixture(scope="session")
def mub2():
    return Q.mub_set(2)


@pytest.fixture(scope="session")
def mub3():
    return Q.mub_set(3)


@pytest.fixture(scope="session")
def mub4():
    return Q.mub_set(4)


@pytest.fixture(scope="session")
def sic2():
    return Q.sic_set(2)


@pytest.fixture(scope="session")
def sic3():
    return Q.sic_set(3)


@pytest.fixture(scope="session")
def gsic3():
    _, tmax = Q.gsic_positivity_range(3)
    return Q.gsic(3, 0.8 * tmax)


@pytest.fixture(scope="session")
def mum3():
    _, tmax = Q.mum_positivity_range(3)
    return Q.mum_set(3, 0.7 * tmax)
