import numpy as np
import pytest

from cayley_spectra import (
    RegularOperator,
    adjacency_element,
    find_standard_generators,
    hermitian_eig,
    icosahedral_character_table,
    icosahedral_group,
    left_regular,
)


@pytest.fixture(scope="session")
def ip():
    return icosahedral_group()


@pytest.fixture(scope="session")
def gens(ip):
    c5, c2 = find_standard_generators(ip)
    return c5.index, c2.index


@pytest.fixture(scope="session")
def delta(ip, gens):
    return adjacency_element(ip, *gens)


@pytest.fixture(scope="session")
def adjacency_operator(ip, delta):
    """The weighted Cayley adjacency operator, minus the left-regular image."""
    return RegularOperator(-left_regular(delta).matrix, ip, 1, side="left")


@pytest.fixture(scope="session")
def adjacency_spectrum(adjacency_operator):
    return hermitian_eig(adjacency_operator)


@pytest.fixture(scope="session")
def char_table():
    return icosahedral_character_table()


@pytest.fixture(scope="session")
def rng_factory():
    def make(seed):
        return np.random.default_rng(seed)

    return make
