import pytest

from varietal.base import finite_set, parallel_pair_index, terminal, trivial_index
from varietal.catalog import (
    global_state_presentation,
    monoid_presentation,
    semilattice_presentation,
)


@pytest.fixture(scope="session")
def I():
    return trivial_index()


@pytest.fixture(scope="session")
def B():
    return parallel_pair_index()


@pytest.fixture(scope="session")
def semilattice():
    return semilattice_presentation()


@pytest.fixture(scope="session")
def monoid():
    return monoid_presentation()


@pytest.fixture(scope="session")
def global_state():
    return global_state_presentation(2, 1)


def sizes(n, I):
    return finite_set(n, I)
